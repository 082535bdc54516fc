//! The experiment suites behind the `experiment` subcommand.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsplab_core::certificates::{verify_cw_run, verify_greedy_run};
use tsplab_core::exact::{family_opt, held_karp, FamilyOpt};
use tsplab_core::heuristics::{clarke_wright, greedy_tour, TieBreak, Tour};
use tsplab_core::instances::{
    cw_certificate, gen_cw_instance, gen_gk, gen_one_two, gk_certificate, one_two_certificate,
    Family, GkKind,
};
use tsplab_core::metrics::{Instance, Length, SquareMatrix};

use crate::{HarnessError, Result};

/// One line of a ratio table.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    /// Family parameter: the level k or the city count n.
    pub param: u64,
    pub n: usize,
    /// Full heuristic tour length (scaled).
    pub heuristic_len: Length,
    /// Certified partial length (scaled).
    pub partial_len_scaled: u64,
    /// Optimum or upper bound (scaled), with its tag.
    pub opt_scaled: u64,
    pub opt_tag: &'static str,
    /// The ratio the family's claim is stated about, in lowest terms.
    pub ratio: Ratio<u64>,
    /// The closed-form bound the ratio is compared against.
    pub bound: Ratio<u64>,
}

/// (2/9)*log3(n+1) <= a/b, checked as 3^(9a) >= (n+1)^(2b) in integers.
fn log3_bound_holds(a: u64, b: u64, n: u64) -> bool {
    let lhs = BigUint::from(3u32).pow(u32::try_from(9 * a).expect("exponent fits u32"));
    let rhs = BigUint::from(n + 1).pow(u32::try_from(2 * b).expect("exponent fits u32"));
    lhs >= rhs
}

fn expect_exact(len: Length, what: &str) -> Result<u64> {
    len.exact()
        .ok_or_else(|| HarnessError::Assertion(format!("{what} is not an exact integer")))
}

/// Grid-family experiment: verify the level-k certificate, run the full
/// greedy tour it seeds, and check the certified ratio against both
/// closed-form lower bounds (claims start at k = 1).
pub fn run_gk_experiment(k_max: u32, kind: GkKind) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let (instance, _) = gen_gk(k, kind)?;
        let cert = gk_certificate(k)?;
        let verdict = verify_greedy_run(&instance, &cert)?;
        if !verdict.passed() {
            return Err(HarnessError::Verification {
                param: u64::from(k),
                verdict,
            });
        }
        let partial = verdict.stats.total_length_scaled;
        if partial != cert.expected_length_scaled {
            return Err(HarnessError::Assertion(format!(
                "level {k}: certified length {partial} differs from declared {}",
                cert.expected_length_scaled
            )));
        }
        let tour = greedy_tour(&instance, &TieBreak::CertificateFirst(cert))?;
        let FamilyOpt::Exact { length_scaled: opt } = family_opt(Family::Gk(k))? else {
            unreachable!("grid family has an exact optimum");
        };
        let ratio = Ratio::new(partial, opt);
        let bound = Ratio::new(2 * u64::from(k) + 8, 9);
        if k >= 1 {
            if ratio <= bound {
                return Err(HarnessError::Assertion(format!(
                    "level {k}: ratio {ratio} is not above (2k+8)/9 = {bound}"
                )));
            }
            if !log3_bound_holds(partial, opt, instance.n() as u64) {
                return Err(HarnessError::Assertion(format!(
                    "level {k}: ratio {ratio} is below (2/9)*log3(n+1)"
                )));
            }
        }
        rows.push(ExperimentRow {
            param: u64::from(k),
            n: instance.n(),
            heuristic_len: tour.length,
            partial_len_scaled: partial,
            opt_scaled: opt,
            opt_tag: "exact",
            ratio,
            bound,
        });
    }
    Ok(rows)
}

/// Hub-family experiment: verify the shortcut certificate, run the full
/// Clarke-Wright tour, compare the measured tour against the bound
/// denominator, and check (2k+17)/18 for k >= 1. At k = 0 the measured tour
/// must equal the Held-Karp optimum.
pub fn run_cw_experiment(k_max: u32) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let (instance, _, hub) = gen_cw_instance(k)?;
        let cert = cw_certificate(k)?;
        let verdict = verify_cw_run(&instance, hub.hub_id, &cert)?;
        if !verdict.passed() {
            return Err(HarnessError::Verification {
                param: u64::from(k),
                verdict,
            });
        }
        let partial = verdict.stats.total_length_scaled;
        let tour = clarke_wright(&instance, hub.hub_id, &TieBreak::CertificateFirst(cert))?;
        let measured = expect_exact(tour.length, "Clarke-Wright tour length")?;
        // the certificate spans every non-hub city, so the full tour is the
        // certified path plus the two remaining hub edges
        if measured != partial + 2 * hub.hub_len_scaled {
            return Err(HarnessError::Assertion(format!(
                "level {k}: measured tour {measured} differs from certified path plus hub edges"
            )));
        }
        let FamilyOpt::Bounds {
            cycle_plus_hub_scaled: denom,
            ..
        } = family_opt(Family::CwGk(k))?
        else {
            unreachable!("hub family reports bounds");
        };
        let ratio = Ratio::new(measured, denom);
        let bound = Ratio::new(2 * u64::from(k) + 17, 18);
        if k >= 1 && ratio < bound {
            return Err(HarnessError::Assertion(format!(
                "level {k}: ratio {ratio} is below (2k+17)/18 = {bound}"
            )));
        }
        if k == 0 {
            let opt = held_karp(&instance)?;
            if measured != opt.length_scaled {
                return Err(HarnessError::Assertion(format!(
                    "level 0: measured tour {measured} differs from optimum {}",
                    opt.length_scaled
                )));
            }
        }
        rows.push(ExperimentRow {
            param: u64::from(k),
            n: instance.n(),
            heuristic_len: tour.length,
            partial_len_scaled: partial,
            opt_scaled: denom,
            opt_tag: "cycle+hub",
            ratio,
            bound,
        });
    }
    Ok(rows)
}

/// 1-2 family experiment: certified greedy length (3n-1)/2 against the
/// Held-Karp optimum n; the ratio must equal 3/2 - 1/(2n) exactly.
pub fn run_onetwo_experiment(n_list: &[usize]) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        if n > 18 {
            return Err(HarnessError::Core(tsplab_core::Error::SizeCap {
                what: "1-2 experiment city count",
                cap: 18,
                got: n,
            }));
        }
        let instance = gen_one_two(n)?;
        let cert = one_two_certificate(n)?;
        let verdict = verify_greedy_run(&instance, &cert)?;
        if !verdict.passed() {
            return Err(HarnessError::Verification {
                param: n as u64,
                verdict,
            });
        }
        let partial = verdict.stats.total_length_scaled;
        let tour = greedy_tour(&instance, &TieBreak::CertificateFirst(cert))?;
        let greedy_len = expect_exact(tour.length, "greedy tour length")?;
        let nn = n as u64;
        if greedy_len != (3 * nn - 1) / 2 {
            return Err(HarnessError::Assertion(format!(
                "n={n}: greedy length {greedy_len} differs from (3n-1)/2"
            )));
        }
        let opt = held_karp(&instance)?;
        if opt.length_scaled != nn {
            return Err(HarnessError::Assertion(format!(
                "n={n}: optimum {} differs from n",
                opt.length_scaled
            )));
        }
        let ratio = Ratio::new(greedy_len, nn);
        let bound = Ratio::new(3, 2) - Ratio::new(1, 2 * nn);
        if ratio != bound {
            return Err(HarnessError::Assertion(format!(
                "n={n}: ratio {ratio} differs from 3/2 - 1/(2n) = {bound}"
            )));
        }
        rows.push(ExperimentRow {
            param: nn,
            n,
            heuristic_len: tour.length,
            partial_len_scaled: partial,
            opt_scaled: nn,
            opt_tag: "exact",
            ratio,
            bound,
        });
    }
    Ok(rows)
}

/// Summary of a randomized 1-2 upper-bound check.
#[derive(Clone, Debug)]
pub struct OneTwoRandomReport {
    pub n: usize,
    pub trials: u32,
    pub seed: u64,
    pub max_ratio: Ratio<u64>,
    pub bound: Ratio<u64>,
    /// Trials where the greedy tour was already optimal.
    pub optimal_trials: u32,
}

fn random_one_two_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if rng.random_bool(0.5) { 1 } else { 2 };
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    Instance::new_explicit(format!("random_onetwo_{n}"), m, 1, None)
        .expect("matrix is symmetric by construction")
}

fn unit_edge_count(instance: &Instance, order: &[usize]) -> u64 {
    let mut count = 0;
    for i in 0..order.len() {
        let u = order[i];
        let v = order[(i + 1) % order.len()];
        if instance.dist_value(u, v).unwrap() == Length::Exact(1) {
            count += 1;
        }
    }
    count
}

/// Random 1-2 matrices under seeded greedy tie-breaking: every trial must
/// respect the 3/2 - 1/(2n) upper bound, and whenever greedy is not optimal
/// the unit-edge counts must satisfy k <= 2m - 1 (k in the optimal tour,
/// m in the greedy tour).
pub fn random_onetwo_check(n: usize, trials: u32, seed: u64) -> Result<OneTwoRandomReport> {
    if !(5..=12).contains(&n) {
        return Err(HarnessError::Core(tsplab_core::Error::InvalidArgument(
            format!("random 1-2 check needs 5 <= n <= 12, got {n}"),
        )));
    }
    if trials == 0 {
        return Err(HarnessError::Core(tsplab_core::Error::InvalidArgument(
            "at least one trial required".into(),
        )));
    }
    let bound = Ratio::new(3, 2) - Ratio::new(1, 2 * n as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = Ratio::new(0, 1);
    let mut optimal_trials = 0;
    for trial in 0..trials {
        let instance = random_one_two_instance(&mut rng, n);
        let tie_seed = rng.random::<u64>();
        let tour: Tour = greedy_tour(&instance, &TieBreak::SeededRandom(tie_seed))?;
        let greedy_len = expect_exact(tour.length, "greedy tour length")?;
        let opt = held_karp(&instance)?;
        let ratio = Ratio::new(greedy_len, opt.length_scaled);
        if ratio > bound {
            return Err(HarnessError::Assertion(format!(
                "n={n} trial {trial}: ratio {ratio} exceeds 3/2 - 1/(2n) = {bound}"
            )));
        }
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        if greedy_len == opt.length_scaled {
            optimal_trials += 1;
        } else {
            let m = unit_edge_count(&instance, &tour.order);
            let k = unit_edge_count(&instance, &opt.tour);
            if k + 1 > 2 * m {
                return Err(HarnessError::Assertion(format!(
                    "n={n} trial {trial}: optimal tour has {k} unit edges but greedy only {m}, \
                     violating k <= 2m - 1"
                )));
            }
        }
    }
    Ok(OneTwoRandomReport {
        n,
        trials,
        seed,
        max_ratio,
        bound,
        optimal_trials,
    })
}
