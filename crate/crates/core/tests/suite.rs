use whitehead_lab::group::{catalog_group, SubgroupLattice};
use whitehead_lab::k1::{integral_log_l, random_unit, seeded_rng, UnitShape};
use whitehead_lab::padic::PrecisionContext;
use whitehead_lab::ring::pushforward;
use whitehead_lab::suite::{run_suite, Injection, SuiteConfig};
use whitehead_lab::Error;

fn config(name: &str, p: u64) -> (whitehead_lab::group::FiniteGroup, SuiteConfig) {
    let g = catalog_group(name, &[]).unwrap();
    let ctx = PrecisionContext::for_group(p, g.order(), 16, 7).unwrap();
    (g, SuiteConfig::new(name, ctx))
}

#[test]
fn c4_defaults_pass() {
    let (g, cfg) = config("C4", 2);
    let r = run_suite(g, &cfg).unwrap();
    assert!(r.passed, "{}", r.to_text());
    assert_eq!(r.checks.len(), 19);
}

#[test]
fn q8_defaults_pass() {
    let (g, cfg) = config("Q8", 2);
    let r = run_suite(g, &cfg).unwrap();
    assert!(r.passed, "{}", r.to_text());
}

#[test]
fn corrupted_phi_tuple_is_named() {
    let (g, mut cfg) = config("D4", 2);
    cfg.inject = Some(Injection::PhiTuple);
    let r = run_suite(g, &cfg).unwrap();
    assert!(!r.passed);
    let c = r.check("beta_conditions").unwrap();
    assert!(!c.passed);
    assert!(c.violated.contains(&"A1".to_string()), "{c:?}");
    assert!(c.witnesses.iter().all(|w| w.sample == Some(0)));
    assert!(r.checks.iter().filter(|c| !c.passed).count() == 1);
}

#[test]
fn corrupted_psi_tuple_is_named() {
    for (name, p) in [("C3", 3), ("Q8", 2)] {
        let (g, mut cfg) = config(name, p);
        cfg.inject = Some(Injection::PsiTuple);
        let r = run_suite(g, &cfg).unwrap();
        let c = r.check("theta_conditions").unwrap();
        assert!(!c.passed, "{name}");
        assert!(c.violated.contains(&"M4".to_string()), "{name}: {c:?}");
        assert!(!c.violated.contains(&"M3".to_string()), "{name}");
        assert!(r.to_text().contains("FAIL  theta_conditions"), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let (g, cfg) = config("Heis27", 3);
    let a = run_suite(g.clone(), &cfg).unwrap().to_json();
    let b = run_suite(g, &cfg).unwrap().to_json();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\": \"whitehead-lab/1\""));
    assert!(!a.contains("wall_time"));
}

#[test]
fn family_selection_and_counts() {
    let (g, mut cfg) = config("C9", 3);
    cfg.families = vec![whitehead_lab::suite::Family::Lattice];
    cfg.lattice_samples = 5;
    let r = run_suite(g, &cfg).unwrap();
    assert_eq!(r.checks.len(), 1);
    assert_eq!(r.checks[0].samples, 5);
    assert!(r.passed, "containment holds for any sample count");
}

#[test]
fn bad_configs_are_rejected() {
    let (g, mut cfg) = config("C4", 2);
    cfg.units = 0;
    let e = run_suite(g.clone(), &cfg).unwrap_err();
    assert_eq!(e.check, "setup");
    let (_, cfg3) = config("C3", 3);
    let e = run_suite(g, &cfg3).unwrap_err();
    assert!(matches!(e.error, Error::BadParams(_)));
}

/// `L` commutes with the projection to `G/Z` for a central `Z` of order `p`.
#[test]
fn l_is_natural_for_central_quotients() {
    for name in ["D4", "Q8", "Heis27", "C9"] {
        let g = catalog_group(name, &[]).unwrap();
        let p = g.p();
        let center = g.center();
        let z = g.subgroup_generated(&[*center.elements().iter().find(|&&x| g.element_order(x) == p as usize).unwrap()]);
        let quo = g.quotient(&g.whole(), &z).unwrap();
        let lat = SubgroupLattice::new(g.clone()).unwrap();
        let latq = SubgroupLattice::new(quo.group.clone()).unwrap();
        let ring = PrecisionContext::for_group(p, g.order(), 16, 0).unwrap().work_ring();
        let mut rng = seeded_rng(11, 0);
        for shape in [UnitShape::General, UnitShape::Principal, UnitShape::General] {
            let u = random_unit(&g, ring, shape, &mut rng);
            let uq = pushforward(&ring, quo.order(), &u, |x| quo.project(x));
            let lq = integral_log_l(&latq, ring, &uq).unwrap();
            let l = integral_log_l(&lat, ring, &u).unwrap();
            let moved = l.map_linear(latq.classes.len(), |r, src, dst| {
                for (c, &a) in src.iter().enumerate() {
                    let k = latq.classes.class_of[quo.project(lat.classes.representatives[c])];
                    dst[k] = r.add(dst[k], a);
                }
            });
            assert!(moved.residual(&lq) >= 16, "{name}");
        }
    }
}
