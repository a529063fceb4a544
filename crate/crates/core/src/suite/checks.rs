//! The individual checks. Each takes the shared sample data and returns one
//! `CheckResult`.

use rand::Rng;
use rayon::prelude::*;

use super::{CheckResult, Family, Injection, LatticeStatus, SuiteConfig, SuiteError, SuiteWitness};
use crate::additive::{
    beta_all, beta_cyclic, check_phi_conditions, ker_omega_basis, omega_map, phi_module_basis, q_map, tau, v_g_composite,
    v_g_explicit, v_map, ConditionReport, PhiTuple, Shape,
};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::k1::{
    check_psi_conditions, check_psi_conditions_with, integral_log_l, key_identity_all, oliver_taylor_check, random_unit,
    script_l, seeded_rng, theta_all, CharacterChoice, PsiTuple, UnitShape,
};
use crate::padic::{HowellBasis, PrecisionContext, QpVec, Zp, INTERNAL_HEADROOM};
use crate::ring::GroupRing;

const UNIT_STREAM: u64 = 1;
const TUPLE_STREAM: u64 = 2;
const LATTICE_STREAM: u64 = 3;
const COMMUTATOR_STREAM: u64 = 4;

/// Number of commutator units tried by the injectivity check.
const COMMUTATORS: usize = 8;

pub(super) struct SuiteData<'a> {
    lat: &'a SubgroupLattice,
    config: &'a SuiteConfig,
    ring: Zp,
    units: Vec<Vec<u128>>,
}

fn shape_for(i: usize) -> UnitShape {
    match i % 4 {
        2 => UnitShape::Principal,
        3 => UnitShape::Trivial,
        _ => UnitShape::General,
    }
}

fn sample_units(lat: &SubgroupLattice, ring: Zp, seed: u64, stream: u64, count: usize) -> Vec<Vec<u128>> {
    let mut rng = seeded_rng(seed, stream);
    (0..count).map(|i| random_unit(&lat.group, ring, shape_for(i), &mut rng)).collect()
}

impl<'a> SuiteData<'a> {
    pub(super) fn prepare(lat: &'a SubgroupLattice, config: &'a SuiteConfig) -> Result<Self> {
        let ring = config.ctx.work_ring();
        let count = config.units.max(config.identity_units);
        let units = sample_units(lat, ring, config.ctx.seed, UNIT_STREAM, count);
        Ok(SuiteData { lat, config, ring, units })
    }

    fn n_check(&self) -> u32 {
        self.config.ctx.n_check
    }

    fn identity_units(&self) -> &[Vec<u128>] {
        &self.units[..self.config.identity_units]
    }

    fn class_vector(&self, c: usize) -> QpVec {
        let mut e = vec![0u128; self.lat.classes.len()];
        e[c] = 1;
        QpVec::integral(self.ring, e)
    }
}

pub(super) fn as_failure(name: &str, family: Family, e: Error) -> std::result::Result<CheckResult, SuiteError> {
    match e {
        Error::PrecisionExhausted(_) => Err(SuiteError { check: name.to_string(), error: e }),
        e => {
            let mut r = Tally::new(name, family);
            r.fail(SuiteWitness { message: Some(e.to_string()), ..Default::default() });
            Ok(r.finish())
        }
    }
}

/// Accumulates samples, residuals and witnesses for one check.
struct Tally {
    result: CheckResult,
}

const MAX_WITNESSES: usize = 8;

impl Tally {
    fn new(name: &str, family: Family) -> Self {
        Tally {
            result: CheckResult {
                name: name.to_string(),
                family,
                passed: true,
                samples: 0,
                min_residual: None,
                violated: Vec::new(),
                witnesses: Vec::new(),
                status: None,
                note: None,
            },
        }
    }

    fn fail(&mut self, w: SuiteWitness) {
        self.result.passed = false;
        if let Some(c) = &w.condition {
            if !self.result.violated.contains(c) {
                self.result.violated.push(c.clone());
            }
        }
        if self.result.witnesses.len() < MAX_WITNESSES {
            self.result.witnesses.push(w);
        }
    }

    /// Records a residual against the threshold `n`.
    fn residual(&mut self, r: i64, n: u32, w: impl FnOnce() -> SuiteWitness) {
        self.result.min_residual = Some(self.result.min_residual.map_or(r, |m| m.min(r)));
        if r < n as i64 {
            let mut w = w();
            w.residual = Some(r);
            self.fail(w);
        }
    }

    fn condition_report(&mut self, sample: usize, report: &ConditionReport) {
        for c in &report.conditions {
            for w in c.witnesses.iter() {
                self.fail(SuiteWitness {
                    sample: Some(sample),
                    subgroups: w.subgroups.clone(),
                    condition: Some(c.name.clone()),
                    residual: w.residual,
                    message: None,
                });
            }
            if !c.passed && c.witnesses.is_empty() {
                self.fail(SuiteWitness { sample: Some(sample), condition: Some(c.name.clone()), ..Default::default() });
            }
        }
    }

    fn finish(mut self) -> CheckResult {
        self.result.violated.sort();
        self.result
    }
}

fn sample(i: usize) -> impl FnOnce() -> SuiteWitness {
    move || SuiteWitness { sample: Some(i), ..Default::default() }
}

fn sample_at(i: usize, h: usize) -> impl FnOnce() -> SuiteWitness {
    move || SuiteWitness { sample: Some(i), subgroups: vec![h], ..Default::default() }
}

fn tau_beta(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("tau_beta", Family::Additive);
    for c in 0..d.lat.classes.len() {
        let e = d.class_vector(c);
        let back = tau(d.lat, &beta_cyclic(d.lat, &e)?)?;
        t.residual(back.residual(&e), d.n_check(), sample(c));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn beta_conditions(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("beta_conditions", Family::Additive);
    for c in 0..d.lat.classes.len() {
        let e = d.class_vector(c);
        for mut tuple in [beta_cyclic(d.lat, &e)?, beta_all(d.lat, &e)?] {
            if c == 0 && d.config.inject == Some(Injection::PhiTuple) {
                let last = tuple.entries.len() - 1;
                let mut v = tuple.entries[last].numerators().to_vec();
                v[0] = d.ring.add(v[0], 1);
                tuple.entries[last] = QpVec::from_parts(d.ring, v, tuple.entries[last].shift());
            }
            let report = check_phi_conditions(d.lat, &tuple, d.n_check())?;
            t.condition_report(c, &report);
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn span_check(d: &SuiteData<'_>, shape: Shape, name: &str) -> Result<CheckResult> {
    let mut t = Tally::new(name, Family::Additive);
    let n = d.n_check();
    let ring = d.config.ctx.check_ring();
    let solved = phi_module_basis(d.lat, shape, n, INTERNAL_HEADROOM)?;
    let images = (0..d.lat.classes.len())
        .map(|c| {
            let e = QpVec::integral(ring, d.class_vector(c).numerators().iter().map(|&x| ring.reduce(x)).collect());
            let img = if shape == Shape::CyclicOnly { beta_cyclic(d.lat, &e)? } else { beta_all(d.lat, &e)? };
            img.flatten(n)
        })
        .collect::<Result<Vec<_>>>()?;
    t.result.samples = images.len();
    let span = HowellBasis::new(ring, solved.ncols(), images)?;
    if !span.equals(&solved)? {
        t.fail(SuiteWitness {
            message: Some(format!("span has log size {}, solved module {}", span.log_size(), solved.log_size())),
            ..Default::default()
        });
    }
    Ok(t.finish())
}

fn phi_c_span(d: &SuiteData<'_>) -> Result<CheckResult> {
    span_check(d, Shape::CyclicOnly, "phi_c_span")
}

fn phi_g_span(d: &SuiteData<'_>) -> Result<CheckResult> {
    span_check(d, Shape::AllSubgroups, "phi_g_span")
}

/// `q o proj = id` on a basis of `Phi^G` and `proj o q = id` on a basis of
/// `Phi_C`, both solved at the working precision.
fn q_proj(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("q_proj", Family::Additive);
    let n = d.config.ctx.n_work;
    let all = phi_module_basis(d.lat, Shape::AllSubgroups, n, INTERNAL_HEADROOM)?;
    for (i, row) in all.rows().iter().enumerate() {
        let x = PhiTuple::from_flat(d.lat, Shape::AllSubgroups, d.ring, row)?;
        let back = q_map(d.lat, &x.project(d.lat))?;
        t.residual(back.residual(&x), d.n_check(), sample(i));
        t.result.samples += 1;
    }
    let cyc = phi_module_basis(d.lat, Shape::CyclicOnly, n, INTERNAL_HEADROOM)?;
    for (i, row) in cyc.rows().iter().enumerate() {
        let x = PhiTuple::from_flat(d.lat, Shape::CyclicOnly, d.ring, row)?;
        let q = q_map(d.lat, &x)?;
        if q.min_valuation().is_some_and(|v| v < 0) {
            t.fail(SuiteWitness { sample: Some(i), message: Some("q image is not integral".into()), ..Default::default() });
        }
        t.residual(q.project(d.lat).residual(&x), d.n_check(), sample(i));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn v_phi_square(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("v_phi_square", Family::Additive);
    let g = &d.lat.group;
    let p = d.lat.p() as usize;
    for c in 0..d.lat.classes.len() {
        let rep = d.lat.classes.representatives[c];
        let cp = d.lat.classes.class_of[g.pow(rep, p)];
        let lhs = v_map(d.lat, &beta_cyclic(d.lat, &d.class_vector(c))?)?;
        let rhs = beta_cyclic(d.lat, &d.class_vector(cp))?;
        t.residual(lhs.residual(&rhs), d.n_check(), sample(c));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn v_g_forms(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("v_g_forms", Family::Additive);
    let mut rng = seeded_rng(d.config.ctx.seed, TUPLE_STREAM);
    for i in 0..d.config.tuples {
        let a: Vec<u128> =
            (0..d.lat.classes.len()).map(|_| d.ring.from_i64(rng.gen_range(-(1i64 << 15)..=1 << 15))).collect();
        let x = beta_all(d.lat, &QpVec::integral(d.ring, a))?;
        let r = v_g_explicit(d.lat, &x)?.residual(&v_g_composite(d.lat, &x)?);
        t.residual(r, d.n_check(), sample(i));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn logs(d: &SuiteData<'_>, units: &[Vec<u128>]) -> Vec<Result<QpVec>> {
    units.par_iter().map(|u| integral_log_l(d.lat, d.ring, u)).collect()
}

fn l_integrality(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("l_integrality", Family::Multiplicative);
    for (i, l) in logs(d, &d.units[..d.config.units]).into_iter().enumerate() {
        match l {
            Ok(_) => {}
            Err(e @ Error::IntegralityViolation(_)) => {
                t.fail(SuiteWitness { sample: Some(i), message: Some(e.to_string()), ..Default::default() })
            }
            Err(e) => return Err(e),
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn l_additivity(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("l_additivity", Family::Multiplicative);
    let gr = GroupRing::new(&d.lat.group, d.ring);
    let units = &d.units[..d.config.units];
    let res: Vec<Result<i64>> = (0..units.len())
        .into_par_iter()
        .map(|i| {
            let u = &units[i];
            let v = &units[(i + 1) % units.len()];
            let luv = integral_log_l(d.lat, d.ring, &gr.mul(u, v))?;
            let sum = integral_log_l(d.lat, d.ring, u)?.add(&integral_log_l(d.lat, d.ring, v)?);
            Ok(luv.residual(&sum))
        })
        .collect();
    for (i, r) in res.into_iter().enumerate() {
        t.residual(r?, d.n_check(), sample(i));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn l_teichmueller(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("l_teichmueller", Family::Multiplicative);
    let gr = GroupRing::new(&d.lat.group, d.ring);
    for c in 1..d.lat.p() as u128 {
        let u = gr.scalar(d.ring.teichmueller(c)?);
        let l = integral_log_l(d.lat, d.ring, &u)?;
        if l.numerators().iter().any(|&x| x != 0) {
            t.fail(SuiteWitness { sample: Some(c as usize), message: Some("L is not exactly 0".into()), ..Default::default() });
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn omega_l(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("omega_l", Family::Multiplicative);
    for (i, l) in logs(d, &d.units[..d.config.units]).into_iter().enumerate() {
        let w = omega_map(d.lat, &l?)?;
        if w.sign != 1 || w.element != 0 {
            t.fail(SuiteWitness {
                sample: Some(i),
                message: Some(format!("omega = ({}, {})", w.sign, w.element)),
                ..Default::default()
            });
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn oliver_taylor(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("oliver_taylor", Family::Multiplicative);
    let units = d.identity_units();
    let pairs: Vec<(usize, usize)> = (0..units.len()).flat_map(|i| (0..d.lat.len()).map(move |h| (i, h))).collect();
    let res: Vec<Result<i64>> =
        pairs.par_iter().map(|&(i, h)| oliver_taylor_check(d.lat, h, d.ring, &units[i])).collect();
    for (&(i, h), r) in pairs.iter().zip(res) {
        t.residual(r?, d.n_check(), sample_at(i, h));
    }
    t.result.samples = units.len();
    Ok(t.finish())
}

fn thetas(d: &SuiteData<'_>) -> Result<Vec<PsiTuple>> {
    d.identity_units().par_iter().map(|u| theta_all(d.lat, d.ring, u)).collect()
}

fn theta_conditions(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("theta_conditions", Family::Multiplicative);
    let mut ths = thetas(d)?;
    if d.config.inject == Some(Injection::PsiTuple) {
        let c = d.ring.reduce(1 + d.lat.p() as u128);
        let x = &mut ths[0].entries[d.lat.trivial()];
        x.iter_mut().for_each(|a| *a = d.ring.mul(*a, c));
    }
    let reports: Vec<Result<ConditionReport>> =
        ths.par_iter().map(|th| check_psi_conditions(d.lat, th, d.n_check())).collect();
    for (i, r) in reports.into_iter().enumerate() {
        t.condition_report(i, &r?);
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn key_identity(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("key_identity", Family::Multiplicative);
    let all: Vec<usize> = (0..d.lat.len()).collect();
    for (i, u) in d.identity_units().iter().enumerate() {
        for (h, r) in key_identity_all(d.lat, d.ring, u, &all)?.into_iter().enumerate() {
            t.residual(r, d.n_check(), sample_at(i, h));
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn script_l_diagram(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("script_l_diagram", Family::Multiplicative);
    let res: Vec<Result<Vec<i64>>> = d
        .identity_units()
        .par_iter()
        .map(|u| {
            let lhs = script_l(d.lat, &theta_all(d.lat, d.ring, u)?)?;
            let rhs = beta_all(d.lat, &integral_log_l(d.lat, d.ring, u)?)?;
            Ok(lhs.entries.iter().zip(&rhs.entries).map(|(a, b)| a.residual(b)).collect())
        })
        .collect();
    for (i, r) in res.into_iter().enumerate() {
        for (h, r) in r?.into_iter().enumerate() {
            t.residual(r, d.n_check(), sample_at(i, h));
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

/// The `Psi^G` verdicts do not depend on the character fixed for `alpha`.
fn alpha_choice(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("alpha_choice", Family::Multiplicative);
    for (i, th) in thetas(d)?.iter().enumerate() {
        let a = check_psi_conditions_with(d.lat, th, d.n_check(), CharacterChoice::Canonical)?;
        let b = check_psi_conditions_with(d.lat, th, d.n_check(), CharacterChoice::Alternate)?;
        if a != b {
            t.fail(SuiteWitness { sample: Some(i), message: Some("verdicts differ".into()), ..Default::default() });
        }
        t.result.samples += 1;
    }
    Ok(t.finish())
}

fn kernel_teichmueller(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("kernel_teichmueller", Family::Multiplicative);
    for c in 1..d.lat.p() as u128 {
        let x = PsiTuple::diagonal(d.lat, d.ring, d.ring.teichmueller(c)?)?;
        t.condition_report(c as usize, &check_psi_conditions(d.lat, &x, d.n_check())?);
        let l = script_l(d.lat, &x)?;
        let zero = PhiTuple::zero(d.lat, Shape::AllSubgroups, d.ring);
        t.residual(l.residual(&zero), d.n_check(), sample(c as usize));
        t.result.samples += 1;
    }
    Ok(t.finish())
}

/// Units with `theta(u) = 1` have `L(u) = 0`. Commutators `[a, b]` supply
/// such units; the identity is always included.
fn injectivity(d: &SuiteData<'_>) -> Result<CheckResult> {
    let mut t = Tally::new("injectivity", Family::Multiplicative);
    let gr = GroupRing::new(&d.lat.group, d.ring);
    let pool = sample_units(d.lat, d.ring, d.config.ctx.seed, COMMUTATOR_STREAM, 2 * COMMUTATORS);
    let mut candidates = vec![gr.one()];
    for pair in pool.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let ab = gr.mul(a, b);
        let ba = gr.mul(b, a);
        candidates.push(gr.mul(&ab, &gr.invert_unit(&ba)?));
    }
    let mut trivial = 0;
    for (i, u) in candidates.iter().enumerate() {
        if !theta_all(d.lat, d.ring, u)?.is_one() {
            continue;
        }
        trivial += 1;
        let l = integral_log_l(d.lat, d.ring, u)?;
        t.residual(l.residual(&QpVec::zero(d.ring, l.len())), d.n_check(), sample(i));
    }
    t.result.samples = candidates.len();
    t.result.note = Some(format!("{trivial} of {} candidates have theta = 1", candidates.len()));
    Ok(t.finish())
}

/// Compares the span of `L(u_i)` with `ker omega` modulo `p^(n_check - 2)`.
/// Containment is required; equality is reported as saturation.
pub fn image_lattice_check(lat: &SubgroupLattice, ctx: &PrecisionContext, samples: usize) -> Result<CheckResult> {
    let mut t = Tally::new("image_lattice", Family::Lattice);
    let prec = ctx.n_check.saturating_sub(2).max(1);
    let ring = ctx.work_ring();
    let small = ctx.ring(prec);
    let units = sample_units(lat, ring, ctx.seed, LATTICE_STREAM, samples);
    let rows = units
        .par_iter()
        .map(|u| integral_log_l(lat, ring, u)?.to_integral(prec))
        .collect::<Result<Vec<_>>>()?;
    let span = HowellBasis::new(small, lat.classes.len(), rows)?;
    let ker = ker_omega_basis(lat, prec)?;
    t.result.samples = samples;
    if !span.is_contained_in(&ker)? {
        t.fail(SuiteWitness { condition: Some("containment".into()), ..Default::default() });
    }
    let saturated = span.equals(&ker)?;
    t.result.status = Some(if saturated { LatticeStatus::Saturated } else { LatticeStatus::Unsaturated });
    t.result.note = Some(format!(
        "modulus p^{prec}, span log size {} of {}",
        span.log_size(),
        ker.log_size()
    ));
    Ok(t.finish())
}

fn image_lattice(d: &SuiteData<'_>) -> Result<CheckResult> {
    image_lattice_check(d.lat, &d.config.ctx, d.config.lattice_samples)
}

pub(super) const ALL: [(&str, Family, super::CheckFn); 19] = [
    ("tau_beta", Family::Additive, tau_beta),
    ("beta_conditions", Family::Additive, beta_conditions),
    ("phi_c_span", Family::Additive, phi_c_span),
    ("phi_g_span", Family::Additive, phi_g_span),
    ("q_proj", Family::Additive, q_proj),
    ("v_phi_square", Family::Additive, v_phi_square),
    ("v_g_forms", Family::Additive, v_g_forms),
    ("l_integrality", Family::Multiplicative, l_integrality),
    ("l_additivity", Family::Multiplicative, l_additivity),
    ("l_teichmueller", Family::Multiplicative, l_teichmueller),
    ("omega_l", Family::Multiplicative, omega_l),
    ("oliver_taylor", Family::Multiplicative, oliver_taylor),
    ("theta_conditions", Family::Multiplicative, theta_conditions),
    ("key_identity", Family::Multiplicative, key_identity),
    ("script_l_diagram", Family::Multiplicative, script_l_diagram),
    ("alpha_choice", Family::Multiplicative, alpha_choice),
    ("kernel_teichmueller", Family::Multiplicative, kernel_teichmueller),
    ("injectivity", Family::Multiplicative, injectivity),
    ("image_lattice", Family::Lattice, image_lattice),
];
