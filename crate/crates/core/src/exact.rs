//! Exact optimum baselines: Held-Karp subset dynamic programming, a
//! brute-force permutation oracle, and closed-form values for the generated
//! families.

use crate::error::{Error, Result};
use crate::instances::{check_one_two_n, Family, MAX_LEVEL};
use crate::metrics::{Instance, SquareMatrix};

/// Held-Karp needs about n^2 * 2^n states; 18 cities stay under a gigabyte.
pub const HELD_KARP_MAX: usize = 18;
/// (n-1)!/2 tour enumeration cap.
pub const BRUTE_FORCE_MAX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptMethod {
    HeldKarp,
    BruteForce,
}

/// A provably minimal tour.
#[derive(Clone, Debug)]
pub struct OptResult {
    pub length_scaled: u64,
    pub tour: Vec<usize>,
    pub method: OptMethod,
}

fn exact_matrix(instance: &Instance, what: &str) -> Result<SquareMatrix> {
    instance.to_exact_matrix().map_err(|e| match e {
        Error::InexactLength(msg) => {
            Error::InexactLength(format!("{what} needs integer lengths: {msg}"))
        }
        other => other,
    })
}

/// Minimum tour by dynamic programming over (visited set, endpoint) states.
pub fn held_karp(instance: &Instance) -> Result<OptResult> {
    let n = instance.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "tours need at least 3 cities, got {n}"
        )));
    }
    if n > HELD_KARP_MAX {
        return Err(Error::SizeCap {
            what: "Held-Karp city count",
            cap: HELD_KARP_MAX,
            got: n,
        });
    }
    let dist = exact_matrix(instance, "Held-Karp")?;

    const INF: u64 = u64::MAX;
    let full: usize = (1 << n) - 1;
    let mut dp = vec![INF; (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    dp[n] = 0; // mask {0}, endpoint 0 (index 1*n + 0)

    for mask in 1..=full {
        if mask & 1 == 0 {
            continue;
        }
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let cost = dp[mask * n + last];
            if cost == INF {
                continue;
            }
            for next in 1..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let cand = cost.saturating_add(dist.get(last, next));
                let idx = (mask | (1 << next)) * n + next;
                if cand < dp[idx] {
                    dp[idx] = cand;
                    parent[idx] = last as u8;
                }
            }
        }
    }

    let mut best = INF;
    let mut best_last = 0;
    for last in 1..n {
        let cost = dp[full * n + last];
        if cost == INF {
            continue;
        }
        let total = cost.saturating_add(dist.get(last, 0));
        if total < best {
            best = total;
            best_last = last;
        }
    }

    let mut tour = Vec::with_capacity(n);
    let mut mask = full;
    let mut cur = best_last;
    while mask != 1 {
        tour.push(cur);
        let p = parent[mask * n + cur] as usize;
        mask &= !(1 << cur);
        cur = p;
    }
    tour.push(0);
    tour.reverse();

    Ok(OptResult {
        length_scaled: best,
        tour,
        method: OptMethod::HeldKarp,
    })
}

/// Exhaustive (n-1)!/2 tour enumeration. Oracle for [`held_karp`].
pub fn brute_force(instance: &Instance) -> Result<OptResult> {
    use itertools::Itertools;

    let n = instance.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "tours need at least 3 cities, got {n}"
        )));
    }
    if n > BRUTE_FORCE_MAX {
        return Err(Error::SizeCap {
            what: "brute-force city count",
            cap: BRUTE_FORCE_MAX,
            got: n,
        });
    }
    let dist = exact_matrix(instance, "brute force")?;

    let mut best = u64::MAX;
    let mut best_tour: Vec<usize> = Vec::new();
    for perm in (1..n).permutations(n - 1) {
        // fixing city 0 and requiring perm[first] < perm[last] halves the
        // enumeration to one orientation per tour
        if perm[0] > perm[perm.len() - 1] {
            continue;
        }
        let mut total = dist.get(0, perm[0]);
        for w in perm.windows(2) {
            total = total.saturating_add(dist.get(w[0], w[1]));
        }
        total = total.saturating_add(dist.get(perm[perm.len() - 1], 0));
        if total < best {
            best = total;
            best_tour = std::iter::once(0).chain(perm.iter().copied()).collect();
        }
    }

    Ok(OptResult {
        length_scaled: best,
        tour: best_tour,
        method: OptMethod::BruteForce,
    })
}

/// Closed-form optimum (or upper bounds) for a generated family, in the
/// scaled units of that family's instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyOpt {
    Exact {
        length_scaled: u64,
    },
    /// Upper bounds for the hub family, which has no closed-form optimum:
    /// the optimum grid cycle plus both hub edges, and the tighter variant
    /// that drops one unit edge when inserting the hub into the cycle.
    Bounds {
        cycle_plus_hub_scaled: u64,
        insertion_scaled: u64,
    },
}

impl FamilyOpt {
    /// The value to report as the optimum column, with its tag.
    pub fn reported(&self) -> (u64, &'static str) {
        match *self {
            FamilyOpt::Exact { length_scaled } => (length_scaled, "exact"),
            FamilyOpt::Bounds {
                cycle_plus_hub_scaled,
                ..
            } => (cycle_plus_hub_scaled, "cycle+hub"),
        }
    }
}

/// Exact optimum for the grid and 1-2 families, upper bounds for the hub
/// family.
pub fn family_opt(family: Family) -> Result<FamilyOpt> {
    match family {
        Family::Gk(k) => {
            if k > MAX_LEVEL {
                return Err(Error::SizeCap {
                    what: "grid family level",
                    cap: MAX_LEVEL as usize,
                    got: k as usize,
                });
            }
            // the all-unit perimeter cycle is optimal: n edges of length 1
            Ok(FamilyOpt::Exact {
                length_scaled: 3u64.pow(k + 2) - 1,
            })
        }
        Family::OneTwo(n) => {
            check_one_two_n(n)?;
            Ok(FamilyOpt::Exact {
                length_scaled: n as u64,
            })
        }
        Family::CwGk(k) => {
            if k > MAX_LEVEL {
                return Err(Error::SizeCap {
                    what: "grid family level",
                    cap: MAX_LEVEL as usize,
                    got: k as usize,
                });
            }
            let hub_edges = 3u64.pow(k + 2); // both hub edges, true units
            let grid_cycle = 3u64.pow(k + 2) - 1;
            Ok(FamilyOpt::Bounds {
                cycle_plus_hub_scaled: 2 * (grid_cycle + hub_edges),
                insertion_scaled: 2 * (grid_cycle - 1 + hub_edges),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_cw_instance, gen_gk, gen_one_two, GkKind};
    use crate::metrics::Instance;

    fn tour_len(instance: &Instance, tour: &[usize]) -> u64 {
        let mut total = 0;
        for i in 0..tour.len() {
            let u = tour[i];
            let v = tour[(i + 1) % tour.len()];
            total += instance.dist_value(u, v).unwrap().exact().unwrap();
        }
        total
    }

    #[test]
    fn held_karp_grid_level0() {
        for kind in [GkKind::L1, GkKind::Graphic] {
            let (inst, _) = gen_gk(0, kind).unwrap();
            let opt = held_karp(&inst).unwrap();
            assert_eq!(opt.length_scaled, 8);
            assert_eq!(tour_len(&inst, &opt.tour), 8);
        }
    }

    #[test]
    fn held_karp_one_two() {
        let inst = gen_one_two(5).unwrap();
        assert_eq!(held_karp(&inst).unwrap().length_scaled, 5);
    }

    #[test]
    fn held_karp_hub_level0_matches_brute_force() {
        let (inst, _, _) = gen_cw_instance(0).unwrap();
        let hk = held_karp(&inst).unwrap();
        let bf = brute_force(&inst).unwrap();
        assert_eq!(hk.length_scaled, 32);
        assert_eq!(bf.length_scaled, 32);
        assert_eq!(tour_len(&inst, &hk.tour), 32);
        assert_eq!(tour_len(&inst, &bf.tour), 32);
    }

    #[test]
    fn brute_force_uniform_square() {
        let mut m = crate::metrics::SquareMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m.set(i, j, 1);
                }
            }
        }
        let inst = Instance::new_explicit("t", m, 1, None).unwrap();
        assert_eq!(brute_force(&inst).unwrap().length_scaled, 4);
    }

    #[test]
    fn brute_force_triangle_is_edge_sum() {
        let mut m = crate::metrics::SquareMatrix::zeros(3);
        let mut put = |i: usize, j: usize, v: u64| {
            m.set(i, j, v);
            m.set(j, i, v);
        };
        put(0, 1, 2);
        put(1, 2, 3);
        put(0, 2, 4);
        let inst = Instance::new_explicit("t", m, 1, None).unwrap();
        assert_eq!(brute_force(&inst).unwrap().length_scaled, 9);
    }

    #[test]
    fn brute_force_agrees_on_grid_level0() {
        let (inst, _) = gen_gk(0, GkKind::Graphic).unwrap();
        assert_eq!(brute_force(&inst).unwrap().length_scaled, 8);
        assert_eq!(held_karp(&inst).unwrap().length_scaled, 8);
    }

    #[test]
    fn held_karp_rejects_inexact_lengths() {
        let (inst, _) = gen_gk(0, GkKind::L2).unwrap();
        assert!(matches!(held_karp(&inst), Err(Error::InexactLength(_))));
    }

    #[test]
    fn caps_are_enforced() {
        let inst = gen_one_two(21).unwrap();
        assert!(matches!(held_karp(&inst), Err(Error::SizeCap { .. })));
        let inst = gen_one_two(11).unwrap();
        assert!(matches!(brute_force(&inst), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn family_opt_values() {
        assert_eq!(
            family_opt(Family::Gk(1)).unwrap(),
            FamilyOpt::Exact { length_scaled: 26 }
        );
        assert_eq!(
            family_opt(Family::OneTwo(9)).unwrap(),
            FamilyOpt::Exact { length_scaled: 9 }
        );
        // true units 53 and 52 at scale 2
        assert_eq!(
            family_opt(Family::CwGk(1)).unwrap(),
            FamilyOpt::Bounds {
                cycle_plus_hub_scaled: 106,
                insertion_scaled: 104,
            }
        );
    }

    #[test]
    fn insertion_bound_is_tight_at_level0() {
        let FamilyOpt::Bounds {
            insertion_scaled, ..
        } = family_opt(Family::CwGk(0)).unwrap()
        else {
            panic!("hub family reports bounds");
        };
        let (inst, _, _) = gen_cw_instance(0).unwrap();
        assert_eq!(held_karp(&inst).unwrap().length_scaled, insertion_scaled);
    }
}
