//! Deterministic family generators: intervals on a path, unions of intervals
//! on disjoint paths, the complete-graph family with unbounded Radon number,
//! and seeded random families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::{DiscreteSpace, Member, Region, SetFamily};

/// Limit on generated member counts (multipath grows as a power of `m^2`).
pub const MAX_GENERATED_MEMBERS: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Intervals { m: usize },
    Multipath { k: usize, m: usize },
    LowerBound { n: usize },
    Random {
        seed: u64,
        vertices: usize,
        edge_prob: f64,
        sets: usize,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<SetFamily> {
        match *self {
            GeneratorSpec::Intervals { m } => gen_intervals(m),
            GeneratorSpec::Multipath { k, m } => gen_multipath(k, m),
            GeneratorSpec::LowerBound { n } => gen_lowerbound(n),
            GeneratorSpec::Random {
                seed,
                vertices,
                edge_prob,
                sets,
            } => gen_random(seed, vertices, edge_prob, sets),
        }
    }
}

fn padded(prefix: &str, i: usize, max: usize) -> String {
    let width = max.to_string().len();
    format!("{prefix}{i:0width$}")
}

/// Path labels: `v` for a single path, otherwise `a`, `b`, ... (two letters
/// once there are more than 26 paths).
fn path_label(j: usize, k: usize) -> String {
    if k == 1 {
        return "v".into();
    }
    let letter = |x: usize| char::from(b'a' + x as u8);
    if k <= 26 {
        letter(j).to_string()
    } else {
        format!("{}{}", letter(j / 26), letter(j % 26))
    }
}

/// All subpaths of `P_m`, plus the empty region.
pub fn gen_intervals(m: usize) -> Result<SetFamily> {
    if !(2..=64).contains(&m) {
        return Err(Error::Range(format!("intervals need 2 <= m <= 64, got {m}")));
    }
    gen_multipath(1, m)
}

/// `k` disjoint copies of `P_m`; members are all unions with at most one
/// (possibly empty) subpath from each copy.
pub fn gen_multipath(k: usize, m: usize) -> Result<SetFamily> {
    if k == 0 || m < 2 || k * m > 64 {
        return Err(Error::Range(format!(
            "multipath needs k >= 1, m >= 2 and k*m <= 64, got k={k}, m={m}"
        )));
    }
    let choices = m * (m + 1) / 2 + 1;
    let total = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(choices));
    if total.is_none_or(|t| t > MAX_GENERATED_MEMBERS) {
        return Err(Error::Range(format!(
            "multipath(k={k}, m={m}) would have more than {MAX_GENERATED_MEMBERS} members"
        )));
    }
    let label = |j: usize, i: usize| format!("{}{}", path_label(j, k), padded("", i, m));
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for j in 0..k {
        for i in 1..=m {
            names.push(label(j, i));
            if i < m {
                edges.push((label(j, i), label(j, i + 1)));
            }
        }
    }
    let space = DiscreteSpace::new(&names, &edges)?;

    // Per-path choices: None, then every (lo, hi) in lexicographic order.
    let mut per_path: Vec<Option<(usize, usize)>> = vec![None];
    for lo in 1..=m {
        for hi in lo..=m {
            per_path.push(Some((lo, hi)));
        }
    }
    let mut members = Vec::new();
    let mut pick = vec![0usize; k];
    loop {
        let mut vs = Vec::new();
        let mut parts = Vec::new();
        for (j, &c) in pick.iter().enumerate() {
            if let Some((lo, hi)) = per_path[c] {
                for i in lo..=hi {
                    vs.push(space.vertex(&label(j, i))?);
                }
                parts.push(format!("[{},{}]", label(j, lo), label(j, hi)));
            }
        }
        let name = if parts.is_empty() {
            "{}".to_string()
        } else {
            parts.join("+")
        };
        members.push(Member {
            name,
            region: Region::induced(&space, vs),
        });
        // odometer, first path most significant
        let mut j = k;
        loop {
            if j == 0 {
                return SetFamily::new(space, members, true);
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < per_path.len() {
                break;
            }
            pick[j] = 0;
        }
    }
}

/// On `K_n`, member `F_i` is every edge avoiding vertex `i` with its endpoints.
pub fn gen_lowerbound(n: usize) -> Result<SetFamily> {
    if !(3..=12).contains(&n) {
        return Err(Error::Range(format!("lower-bound family needs 3 <= n <= 12, got {n}")));
    }
    let names: Vec<String> = (1..=n).map(|i| padded("", i, n)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    let space = DiscreteSpace::new(&names, &edges)?;
    let members = (1..=n)
        .map(|i| {
            let skip = space.vertex(&names[i - 1])?;
            Ok(Member {
                name: format!("F{}", padded("", i, n)),
                region: Region::induced(&space, (0..n).filter(|&v| v != skip)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(space, members, false)
}

/// Seeded random space and regions, closed under intersection.
pub fn gen_random(seed: u64, vertices: usize, edge_prob: f64, sets: usize) -> Result<SetFamily> {
    if !(1..=12).contains(&vertices) {
        return Err(Error::Range(format!("random family needs 1..=12 vertices, got {vertices}")));
    }
    if sets > 8 {
        return Err(Error::Range(format!("random family needs at most 8 sets, got {sets}")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Range(format!("edge probability {edge_prob} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=vertices).map(|i| padded("x", i, vertices)).collect();
    let mut edges = Vec::new();
    for i in 0..vertices {
        for j in i + 1..vertices {
            if rng.random_bool(edge_prob) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let space = DiscreteSpace::new(&names, &edges)?;
    let members = (1..=sets)
        .map(|s| {
            let vs: Vec<usize> = (0..vertices).filter(|_| rng.random_bool(0.6)).collect();
            let es: Vec<usize> = (0..space.edge_count())
                .filter(|&e| {
                    let (u, v) = space.edge(e);
                    vs.contains(&u) && vs.contains(&v)
                })
                .filter(|_| rng.random_bool(0.7))
                .collect();
            Ok(Member {
                name: format!("S{s}"),
                region: Region::new(&space, vs, es)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(space, members, false)?.close_under_intersection()
}
