//! Named groups and the group-spec format.
//!
//! Catalog groups are permutation groups with fixed generators:
//!
//! | name | params | generators |
//! |------|--------|------------|
//! | `cyclic` | `n` | one `n`-cycle |
//! | `elementary_abelian` | `p`, `rank` | `rank` disjoint `p`-cycles |
//! | `dihedral` | `order` (a power of 2, at least 8) | rotation, reflection `i -> -i` |
//! | `quaternion` | `order` (a power of 2, at least 8) | `a`, `b` in the right regular representation |
//! | `heisenberg` | `p` | `(1,0,0)`, `(0,1,0)` in the right regular representation |
//! | `direct_product` | factor aliases | generators of each factor on disjoint points |
//!
//! Aliases: `C<n>`, `V4`, `D4` (order 8), `Q8`, `Heis27`, and `AxB` products
//! of aliases such as `C3xC3`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{build_group, FiniteGroup, Permutation, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::padic::is_prime;

/// The default verification suite, as (alias, prime) pairs.
pub const DEFAULT_SUITE: [(&str, u64); 12] = [
    ("C2", 2),
    ("C4", 2),
    ("C8", 2),
    ("V4", 2),
    ("D4", 2),
    ("Q8", 2),
    ("C3", 3),
    ("C9", 3),
    ("C3xC3", 3),
    ("Heis27", 3),
    ("C5", 5),
    ("C25", 5),
];

pub const CATALOG_NAMES: [&str; 6] = ["cyclic", "elementary_abelian", "dihedral", "quaternion", "heisenberg", "direct_product"];

/// A group description, as accepted on the command line and in JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Permutations {
        p: u64,
        /// Each generator is a list of cycles on points `1..=degree`.
        generators: Vec<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
    },
    Catalog {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        catalog: String,
        #[serde(default)]
        params: Map<String, Value>,
    },
}

fn smallest_prime_factor(n: usize) -> Option<u64> {
    (2..=n as u64).find(|&d| (n as u64).is_multiple_of(d))
}

fn power_of_two_at_least_8(order: usize) -> bool {
    order >= 8 && order.is_power_of_two()
}

fn cycle(points: std::ops::Range<usize>) -> Vec<usize> {
    points.map(|i| i + 1).collect()
}

// Right regular representation: point x goes to x * s.
fn regular_rep(n: usize, mul: impl Fn(usize, usize) -> usize, gens: &[usize]) -> Vec<Permutation> {
    gens.iter().map(|&s| Permutation((0..n).map(|x| mul(x, s)).collect())).collect()
}

struct Built {
    generators: Vec<Permutation>,
    order: usize,
}

fn param_u64(params: &Map<String, Value>, key: &str) -> Result<u64> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadParams(format!("missing integer parameter `{key}`")))
}

fn cyclic(n: usize) -> Result<Built> {
    if n == 0 {
        return Err(Error::BadParams("cyclic order must be positive".into()));
    }
    let gens = if n == 1 { vec![] } else { vec![Permutation::from_cycles(n, &[cycle(0..n)])?] };
    Ok(Built { generators: gens, order: n })
}

fn elementary_abelian(p: u64, rank: usize) -> Result<Built> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let p = p as usize;
    let n = p * rank;
    let gens = (0..rank)
        .map(|k| Permutation::from_cycles(n, &[cycle(k * p..(k + 1) * p)]))
        .collect::<Result<Vec<_>>>()?;
    let order = p.checked_pow(rank as u32).ok_or_else(|| Error::BadParams("rank too large".into()))?;
    Ok(Built { generators: gens, order })
}

fn dihedral(order: usize) -> Result<Built> {
    if !power_of_two_at_least_8(order) {
        return Err(Error::BadParams(format!("dihedral order {order} must be a power of 2, at least 8")));
    }
    let n = order / 2;
    let rot = Permutation((0..n).map(|i| (i + 1) % n).collect());
    let refl = Permutation((0..n).map(|i| (n - i) % n).collect());
    Ok(Built { generators: vec![rot, refl], order })
}

fn quaternion(order: usize) -> Result<Built> {
    if !power_of_two_at_least_8(order) {
        return Err(Error::BadParams(format!("quaternion order {order} must be a power of 2, at least 8")));
    }
    // a^i b^j <-> i + 2m j, with a^(2m) = 1, b^2 = a^m, b a b^-1 = a^-1
    let m = order / 4;
    let m2 = 2 * m;
    let mul = |x: usize, y: usize| {
        let (i, j) = (x % m2, x / m2);
        let (k, l) = (y % m2, y / m2);
        let k = if j == 1 { (m2 - k) % m2 } else { k };
        let mut e = (i + k) % m2;
        let mut f = j + l;
        if f == 2 {
            e = (e + m) % m2;
            f = 0;
        }
        e + m2 * f
    };
    Ok(Built { generators: regular_rep(order, mul, &[1, m2]), order })
}

fn heisenberg(p: u64) -> Result<Built> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let p = p as usize;
    let order = p * p * p;
    let split = |x: usize| (x % p, x / p % p, x / (p * p));
    let mul = |x: usize, y: usize| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p)
    };
    Ok(Built { generators: regular_rep(order, mul, &[1, p]), order })
}

fn direct_product(factors: &[Built]) -> Built {
    let degrees: Vec<usize> = factors.iter().map(|f| f.generators.first().map_or(1, Permutation::degree)).collect();
    let total: usize = degrees.iter().sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for (f, &d) in factors.iter().zip(&degrees) {
        for g in &f.generators {
            let mut img: Vec<usize> = (0..total).collect();
            for (i, &j) in g.0.iter().enumerate() {
                img[offset + i] = offset + j;
            }
            gens.push(Permutation(img));
        }
        offset += d;
    }
    Built { generators: gens, order: factors.iter().map(|f| f.order).product() }
}

fn alias(name: &str) -> Option<Result<Built>> {
    let parts: Vec<&str> = name.split('x').collect();
    if parts.len() > 1 {
        let factors: Option<Result<Vec<Built>>> = parts.iter().map(|s| alias(s)).collect();
        return factors.map(|r| r.map(|fs| direct_product(&fs)));
    }
    match name {
        "V4" => Some(elementary_abelian(2, 2)),
        "D4" => Some(dihedral(8)),
        "Q8" => Some(quaternion(8)),
        "Heis27" => Some(heisenberg(3)),
        _ => {
            let n = name.strip_prefix('C')?.parse::<usize>().ok()?;
            Some(cyclic(n))
        }
    }
}

fn resolve(name: &str, params: &Map<String, Value>, p: Option<u64>) -> Result<Built> {
    match name {
        "cyclic" => cyclic(param_u64(params, "n")? as usize),
        "elementary_abelian" => {
            let p = match p {
                Some(p) => p,
                None => param_u64(params, "p")?,
            };
            elementary_abelian(p, param_u64(params, "rank")? as usize)
        }
        "dihedral" => dihedral(param_u64(params, "order")? as usize),
        "quaternion" => quaternion(param_u64(params, "order")? as usize),
        "heisenberg" => {
            let p = match params.get("p").and_then(Value::as_u64) {
                Some(p) => p,
                None => p.ok_or_else(|| Error::BadParams("heisenberg needs `p`".into()))?,
            };
            heisenberg(p)
        }
        "direct_product" => {
            let factors = params
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::BadParams("direct_product needs `factors`".into()))?;
            let built = factors
                .iter()
                .map(|f| {
                    let s = f.as_str().ok_or_else(|| Error::BadParams("factor must be an alias string".into()))?;
                    alias(s).unwrap_or_else(|| Err(Error::UnknownCatalogEntry(s.to_string())))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(direct_product(&built))
        }
        other => alias(other).unwrap_or_else(|| Err(Error::UnknownCatalogEntry(other.to_string()))),
    }
}

impl GroupSpec {
    pub fn catalog(name: &str) -> Self {
        GroupSpec::Catalog { p: None, catalog: name.to_string(), params: Map::new() }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Permutations { p, generators, degree } => {
                let max_point = generators.iter().flatten().flatten().copied().max().unwrap_or(1);
                let n = degree.unwrap_or(max_point).max(1);
                let perms =
                    generators.iter().map(|g| Permutation::from_cycles(n, g)).collect::<Result<Vec<_>>>()?;
                if !is_prime(*p) {
                    return Err(Error::BadParams(format!("{p} is not prime")));
                }
                build_group(&perms, *p, cap)
            }
            GroupSpec::Catalog { p, catalog, params } => {
                let built = resolve(catalog, params, *p)?;
                if built.order > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                let prime = match p {
                    Some(p) => *p,
                    None => smallest_prime_factor(built.order)
                        .ok_or_else(|| Error::BadParams("trivial group needs an explicit prime".into()))?,
                };
                if !is_prime(prime) {
                    return Err(Error::BadParams(format!("{prime} is not prime")));
                }
                build_group(&built.generators, prime, cap)
            }
        }
    }
}

/// Builds a catalog group or alias with positional parameters.
pub fn catalog_group(name: &str, params: &[u64]) -> Result<FiniteGroup> {
    catalog_spec(name, params, None)?.build(DEFAULT_ORDER_CAP)
}

fn catalog_spec(name: &str, params: &[u64], p: Option<u64>) -> Result<GroupSpec> {
    let keys: &[&str] = match name {
        "cyclic" => &["n"],
        "elementary_abelian" => &["p", "rank"],
        "dihedral" | "quaternion" => &["order"],
        "heisenberg" => &["p"],
        _ => &[],
    };
    if params.len() > keys.len() {
        return Err(Error::BadParams(format!("too many parameters for `{name}`")));
    }
    let map = keys.iter().zip(params).map(|(k, v)| (k.to_string(), Value::from(*v))).collect();
    Ok(GroupSpec::Catalog { p, catalog: name.to_string(), params: map })
}

/// Parses `catalog:name[:params]` or a path to a JSON group spec. `p`
/// overrides the prime of catalog groups.
pub fn parse_group_arg(arg: &str, p: Option<u64>) -> Result<GroupSpec> {
    if let Some(rest) = arg.strip_prefix("catalog:") {
        let (name, params) = match rest.split_once(':') {
            Some((n, ps)) => (n, ps),
            None => (rest, ""),
        };
        let items: Vec<&str> = params.split(',').filter(|s| !s.is_empty()).collect();
        if name == "direct_product" {
            let factors = items.iter().map(|s| Value::from(*s)).collect::<Vec<_>>();
            let mut map = Map::new();
            map.insert("factors".into(), Value::Array(factors));
            return Ok(GroupSpec::Catalog { p, catalog: name.into(), params: map });
        }
        let nums = items
            .iter()
            .map(|s| s.parse::<u64>().map_err(|_| Error::BadParams(format!("bad parameter `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        return catalog_spec(name, &nums, p);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::BadParams(format!("cannot read {arg}: {e}")))?;
    Ok(serde_json::from_str(&text)?)
}
