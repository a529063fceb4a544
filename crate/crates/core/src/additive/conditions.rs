//! Condition systems for `Phi_C` and `Phi^G`, trace ideals, and the solved
//! modules as Howell bases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PhiTuple, Shape};
use crate::error::{Error, Result};
use crate::group::SubgroupLattice;
use crate::padic::{kernel, HowellBasis, QpVec, Zp};
use crate::ring::Subquotient;

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub subgroups: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    /// Certified agreement in digits, for equalities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

impl ConditionResult {
    pub fn new(name: &str) -> Self {
        ConditionResult { name: name.to_string(), checked: 0, passed: true, witnesses: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub system: String,
    pub precision: u32,
    pub passed: bool,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn new(system: &str, precision: u32, conditions: Vec<ConditionResult>) -> Self {
        let passed = conditions.iter().all(|c| c.passed);
        ConditionReport { system: system.to_string(), precision, passed, conditions }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// `T_H`: the image of `x -> sum_{w in W_G H} w x w^-1` on `Z_p[H^ab]`.
pub fn trace_ideal(lat: &SubgroupLattice, h: usize, ring: Zp) -> Result<HowellBasis> {
    let info = &lat.info[h];
    let g = &lat.group;
    let hab = &info.hab;
    let rows = hab.lifts.iter().map(|&x| {
        let mut row = vec![0u128; hab.order()];
        for &w in &info.weyl_reps {
            let t = hab.project(g.conj(w, x));
            row[t] = ring.add(row[t], 1);
        }
        row
    });
    HowellBasis::new(ring, hab.order(), rows)
}

/// Linear maps between entries, each `Z`-linear on numerators.
#[derive(Clone, Debug)]
pub(crate) enum Op {
    Identity,
    /// `x -> factor * x` on the part of the source basis lying in the
    /// target, zero elsewhere.
    Restrict { map: Vec<Option<usize>>, factor: u64, out: usize },
    /// Basis relabelling.
    Relabel { map: Vec<usize>, out: usize },
    Trace(usize),
    Pi(usize),
}

impl Op {
    pub(crate) fn apply(&self, lat: &SubgroupLattice, sqs: &[Subquotient], ring: &Zp, src: &[u128]) -> Vec<u128> {
        match self {
            Op::Identity => src.to_vec(),
            Op::Restrict { map, factor, out } => {
                let f = ring.reduce(*factor as u128);
                let mut o = vec![0u128; *out];
                for (&c, t) in src.iter().zip(map) {
                    if let Some(t) = *t {
                        o[t] = ring.add(o[t], ring.mul(c, f));
                    }
                }
                o
            }
            Op::Relabel { map, out } => {
                let mut o = vec![0u128; *out];
                for (&c, &t) in src.iter().zip(map) {
                    o[t] = ring.add(o[t], c);
                }
                o
            }
            Op::Trace(i) => sqs[*i].trace(lat, *ring, src),
            Op::Pi(i) => sqs[*i].pi(*ring, src),
        }
    }

    fn out_len(&self, in_len: usize, sqs: &[Subquotient]) -> usize {
        match self {
            Op::Identity => in_len,
            Op::Restrict { out, .. } | Op::Relabel { out, .. } => *out,
            Op::Trace(i) | Op::Pi(i) => sqs[*i].quotient.order(),
        }
    }

    fn apply_qp(&self, lat: &SubgroupLattice, sqs: &[Subquotient], x: &QpVec) -> QpVec {
        let n = self.out_len(x.len(), sqs);
        x.map_linear(n, |ring, src, out| out.copy_from_slice(&self.apply(lat, sqs, ring, src)))
    }
}

/// `left(a_i) == right(a_j)`, with `i`, `j` positions in the tuple.
#[derive(Clone, Debug)]
pub(crate) struct Equation {
    pub condition: &'static str,
    pub left: (usize, Op),
    pub right: (usize, Op),
    pub subgroups: Vec<usize>,
    pub element: Option<usize>,
}

/// The linear conditions of a `Phi` system, precomputed for a lattice.
pub(crate) struct LinearSystem<'a> {
    pub lat: &'a SubgroupLattice,
    pub shape: Shape,
    pub subgroups: Vec<usize>,
    pub sqs: Vec<Subquotient>,
    pub equations: Vec<Equation>,
    /// Positions whose entries must lie in the trace ideal.
    pub trace_members: Vec<usize>,
}

/// `x -> g x g^-1` from `H^ab` to `(g H g^-1)^ab`.
pub(crate) fn conj_relabel(lat: &SubgroupLattice, h: usize, g: usize) -> (usize, Op) {
    let target = lat.conjugate_index(h, g);
    let tab = &lat.info[target].hab;
    let map = lat.info[h].hab.lifts.iter().map(|&x| tab.project(lat.group.conj(g, x))).collect();
    (target, Op::Relabel { map, out: tab.order() })
}

impl<'a> LinearSystem<'a> {
    pub(crate) fn new(lat: &'a SubgroupLattice, shape: Shape) -> Result<Self> {
        let subgroups = shape.indices(lat);
        let pos = |h: usize| subgroups.binary_search(&h).expect("subgroup in shape");
        let mut equations = Vec::new();
        let mut sqs = Vec::new();
        match shape {
            Shape::CyclicOnly => {
                for &hp in &subgroups {
                    for &h in &subgroups {
                        if h == hp || !lat.is_sub(h, hp) {
                            continue;
                        }
                        let hab = &lat.info[h].hab;
                        let map = lat.info[hp]
                            .hab
                            .lifts
                            .iter()
                            .map(|&x| lat.subgroup(h).contains(x).then(|| hab.project(x)))
                            .collect();
                        let factor = (lat.info[hp].order() / lat.info[h].order()) as u64;
                        equations.push(Equation {
                            condition: "A1",
                            left: (pos(hp), Op::Restrict { map, factor, out: hab.order() }),
                            right: (pos(h), Op::Identity),
                            subgroups: vec![h, hp],
                            element: None,
                        });
                    }
                }
            }
            Shape::AllSubgroups => {
                let pairs: Vec<(usize, usize)> = lat.admissible_pairs().into_iter().filter(|(h, h1)| h != h1).collect();
                sqs = pairs.par_iter().map(|&(h, h1)| Subquotient::new(lat, h, h1)).collect::<Result<Vec<_>>>()?;
                for (i, &(h, h1)) in pairs.iter().enumerate() {
                    equations.push(Equation {
                        condition: "A1",
                        left: (pos(h1), Op::Trace(i)),
                        right: (pos(h), Op::Pi(i)),
                        subgroups: vec![h, h1],
                        element: None,
                    });
                }
            }
        }
        for &g in lat.group.generators() {
            for &h in &subgroups {
                let (target, op) = conj_relabel(lat, h, g);
                equations.push(Equation {
                    condition: "A2",
                    left: (pos(h), op),
                    right: (pos(target), Op::Identity),
                    subgroups: vec![h, target],
                    element: Some(g),
                });
            }
        }
        let trace_members = subgroups
            .iter()
            .enumerate()
            .filter(|&(_, &h)| lat.info[h].is_cyclic())
            .map(|(i, _)| i)
            .collect();
        Ok(LinearSystem { lat, shape, subgroups, sqs, equations, trace_members })
    }

    fn system_name(&self) -> &'static str {
        match self.shape {
            Shape::CyclicOnly => "phi_c",
            Shape::AllSubgroups => "phi_g",
        }
    }

    /// Evaluates every condition on `t` at `n_check` digits.
    pub(crate) fn check(&self, t: &PhiTuple, n_check: u32) -> Result<ConditionReport> {
        if t.shape != self.shape || t.subgroups != self.subgroups {
            return Err(Error::PreconditionViolated(format!("expected a {:?} tuple", self.shape)));
        }
        let lat = self.lat;
        let mut a1 = ConditionResult::new("A1");
        let mut a2 = ConditionResult::new("A2");
        let residuals: Vec<i64> = self
            .equations
            .par_iter()
            .map(|e| {
                let l = e.left.1.apply_qp(lat, &self.sqs, &t.entries[e.left.0]);
                let r = e.right.1.apply_qp(lat, &self.sqs, &t.entries[e.right.0]);
                l.residual(&r)
            })
            .collect();
        for (e, &r) in self.equations.iter().zip(&residuals) {
            let slot = if e.condition == "A1" { &mut a1 } else { &mut a2 };
            slot.record(r >= n_check as i64, || Witness {
                subgroups: e.subgroups.clone(),
                element: e.element,
                residual: Some(r),
            });
        }
        let mut a3 = ConditionResult::new("A3");
        let ring = Zp::new(lat.p(), n_check)?;
        for &i in &self.trace_members {
            let h = self.subgroups[i];
            let ok = match t.entries[i].to_integral(n_check) {
                Ok(v) => trace_ideal(lat, h, ring)?.contains(&v)?,
                Err(_) => false,
            };
            a3.record(ok, || Witness { subgroups: vec![h], element: None, residual: None });
        }
        Ok(ConditionReport::new(self.system_name(), n_check, vec![a1, a2, a3]))
    }

    /// Stacked residual of all equations on an integral tuple.
    fn evaluate(&self, ring: &Zp, entries: &[Vec<u128>]) -> Vec<u128> {
        let mut out = Vec::new();
        for e in &self.equations {
            let l = e.left.1.apply(self.lat, &self.sqs, ring, &entries[e.left.0]);
            let r = e.right.1.apply(self.lat, &self.sqs, ring, &entries[e.right.0]);
            out.extend(l.iter().zip(&r).map(|(&x, &y)| ring.sub(x, y)));
        }
        out
    }

    /// The solution module modulo `p^n`, solved modulo `p^(n + slack)`.
    pub(crate) fn solve(&self, n: u32, slack: u32) -> Result<HowellBasis> {
        let lat = self.lat;
        let big = Zp::new(lat.p(), n + slack)?;
        let dims: Vec<usize> = self.subgroups.iter().map(|&h| lat.info[h].hab.order()).collect();
        // parameter columns: trace ideal generators for cyclic entries, unit
        // vectors otherwise
        let mut params: Vec<(usize, Vec<u128>)> = Vec::new();
        for (i, &h) in self.subgroups.iter().enumerate() {
            if self.trace_members.binary_search(&i).is_ok() {
                for row in trace_ideal(lat, h, big)?.rows() {
                    params.push((i, row.clone()));
                }
            } else {
                for j in 0..dims[i] {
                    let mut v = vec![0u128; dims[i]];
                    v[j] = 1;
                    params.push((i, v));
                }
            }
        }
        let expand = |coeffs: &dyn Fn(usize) -> u128| -> Vec<Vec<u128>> {
            let mut entries: Vec<Vec<u128>> = dims.iter().map(|&d| vec![0u128; d]).collect();
            for (k, (i, v)) in params.iter().enumerate() {
                let c = coeffs(k);
                if c == 0 {
                    continue;
                }
                for (e, &x) in entries[*i].iter_mut().zip(v) {
                    *e = big.add(*e, big.mul(c, x));
                }
            }
            entries
        };
        let columns: Vec<Vec<u128>> = (0..params.len())
            .into_par_iter()
            .map(|k| self.evaluate(&big, &expand(&|j| u128::from(j == k))))
            .collect();
        let m = columns.first().map_or(0, Vec::len);
        let sols = kernel(big, m, &columns)?;
        let small = big.with_prec(n)?;
        let total: usize = dims.iter().sum();
        let rows = sols.iter().map(|y| expand(&|k| y[k]).concat().into_iter().map(|x| small.reduce(x)).collect());
        HowellBasis::new(small, total, rows)
    }
}

/// Checks A1-A3 for a tuple of the given shape at `n_check` digits.
pub fn check_phi_conditions(lat: &SubgroupLattice, t: &PhiTuple, n_check: u32) -> Result<ConditionReport> {
    LinearSystem::new(lat, t.shape)?.check(t, n_check)
}

/// Howell basis of `Phi_C` or `Phi^G` modulo `p^n`, over the concatenated
/// coordinates of the shape. The system is solved with `slack` extra digits.
pub fn phi_module_basis(lat: &SubgroupLattice, shape: Shape, n: u32, slack: u32) -> Result<HowellBasis> {
    LinearSystem::new(lat, shape)?.solve(n, slack)
}
