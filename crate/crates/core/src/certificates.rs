//! Certificate verification: is an edge list a genuine prefix of a valid
//! greedy (or Clarke-Wright) execution on an instance?
//!
//! The greedy verifier ships twice. [`verify_greedy_run`] keeps the candidate
//! edges sorted by key and skips over permanently ineligible ones (degrees
//! only grow and components only merge, so ineligibility never reverts).
//! [`verify_greedy_run_brute`] rescans every pair at every step and serves as
//! the oracle for the fast path.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::heuristics::{savings, SelectionState};
use crate::instances::{gk_certificate_length, gk_meta, Certificate, Family};
use crate::metrics::{DistKey, Instance};

/// Aggregate data about the edges a verification or audit has accepted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyStats {
    pub edge_count: usize,
    pub total_length_scaled: u64,
    /// Scaled length -> number of certificate edges of that length.
    pub length_histogram: BTreeMap<u64, usize>,
}

/// Why a certificate step is not a valid heuristic choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An eligible edge with a strictly smaller key exists.
    CheaperEligibleEdge { u: usize, v: usize, key: DistKey },
    /// A feasible pair with strictly larger savings exists.
    HigherSavingsPair { a: usize, b: usize, savings: i64 },
    /// An endpoint of the certificate edge already has degree 2.
    DegreeExceeded { city: usize },
    /// The certificate edge would close a premature cycle.
    ClosesCycle { u: usize, v: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::CheaperEligibleEdge { u, v, key } => {
                write!(f, "eligible edge ({u},{v}) has smaller key {}", key.0)
            }
            Witness::HigherSavingsPair { a, b, savings } => {
                write!(f, "feasible pair ({a},{b}) has larger savings {savings}")
            }
            Witness::DegreeExceeded { city } => write!(f, "city {city} already has degree 2"),
            Witness::ClosesCycle { u, v } => write!(f, "edge ({u},{v}) closes a premature cycle"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Failure {
    /// 0-indexed certificate step at which verification failed.
    pub step: usize,
    pub witness: Witness,
}

/// Verification outcome. Passes iff no failure was found; `stats` covers the
/// verified prefix.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub failure: Option<Failure>,
    pub stats: VerifyStats,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn pass(stats: VerifyStats) -> Self {
        Verdict {
            failure: None,
            stats,
        }
    }

    fn fail(step: usize, witness: Witness, stats: VerifyStats) -> Self {
        Verdict {
            failure: Some(Failure { step, witness }),
            stats,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "PASS ({} edges, total {})",
                self.stats.edge_count, self.stats.total_length_scaled
            ),
            Some(fail) => write!(f, "FAIL at step {}: {}", fail.step, fail.witness),
        }
    }
}

fn validate_cert_edges(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n {
            return Err(Error::IdOutOfRange { id: u, n });
        }
        if v >= n {
            return Err(Error::IdOutOfRange { id: v, n });
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at city {u}")));
        }
        if !seen.insert(crate::instances::normalize_edge(u, v)) {
            return Err(Error::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
    }
    Ok(())
}

fn push_stats(stats: &mut VerifyStats, instance: &Instance, u: usize, v: usize) -> Result<()> {
    let len = instance.dist_value(u, v)?.exact().ok_or_else(|| {
        Error::InexactLength(format!(
            "certificate edge ({u}, {v}) has a non-integer length"
        ))
    })?;
    stats.edge_count += 1;
    stats.total_length_scaled += len;
    *stats.length_histogram.entry(len).or_insert(0) += 1;
    Ok(())
}

fn greedy_feasibility_witness(
    state: &mut SelectionState,
    u: usize,
    v: usize,
) -> Option<Witness> {
    if state.degree(u) >= 2 {
        return Some(Witness::DegreeExceeded { city: u });
    }
    if state.degree(v) >= 2 {
        return Some(Witness::DegreeExceeded { city: v });
    }
    if state.chosen().len() != state.n() - 1 && state.same_component(u, v) {
        return Some(Witness::ClosesCycle { u, v });
    }
    None
}

struct KeyedEdge {
    key: DistKey,
    u: usize,
    v: usize,
}

fn sorted_edges(instance: &Instance) -> Result<Vec<KeyedEdge>> {
    let n = instance.n();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push(KeyedEdge {
                key: instance.dist_key(u, v)?,
                u,
                v,
            });
        }
    }
    edges.sort_unstable_by_key(|e| (e.key, e.u, e.v));
    Ok(edges)
}

/// Verify that the certificate is a prefix of a valid greedy execution: each
/// edge must be eligible and of minimum key among all eligible edges of the
/// instance (ties pass). Sorted-list implementation with a skip pointer.
pub fn verify_greedy_run(instance: &Instance, cert: &Certificate) -> Result<Verdict> {
    let n = instance.n();
    validate_cert_edges(n, &cert.edges)?;
    let edges = sorted_edges(instance)?;
    let mut state = SelectionState::new(n);
    let mut stats = VerifyStats::default();
    let mut ptr = 0;
    for (step, &(u, v)) in cert.edges.iter().enumerate() {
        if let Some(witness) = greedy_feasibility_witness(&mut state, u, v) {
            return Ok(Verdict::fail(step, witness, stats));
        }
        if state.chosen().len() < n - 1 {
            // Skip permanently dead candidates; the first live one has the
            // minimum eligible key. The scan terminates because the (live)
            // certificate edge itself is in the list.
            loop {
                let e = &edges[ptr];
                if state.degree(e.u) >= 2
                    || state.degree(e.v) >= 2
                    || state.same_component(e.u, e.v)
                {
                    ptr += 1;
                    continue;
                }
                break;
            }
            let min = &edges[ptr];
            if min.key < instance.dist_key(u, v)? {
                return Ok(Verdict::fail(
                    step,
                    Witness::CheaperEligibleEdge {
                        u: min.u,
                        v: min.v,
                        key: min.key,
                    },
                    stats,
                ));
            }
        }
        // At n-1 chosen edges only the unique closing edge is eligible, so a
        // feasible certificate edge is automatically minimal.
        state.record(u, v);
        push_stats(&mut stats, instance, u, v)?;
    }
    Ok(Verdict::pass(stats))
}

/// Oracle implementation of [`verify_greedy_run`]: rescans every city pair at
/// every step for the minimum eligible key.
pub fn verify_greedy_run_brute(instance: &Instance, cert: &Certificate) -> Result<Verdict> {
    let n = instance.n();
    validate_cert_edges(n, &cert.edges)?;
    let mut state = SelectionState::new(n);
    let mut stats = VerifyStats::default();
    for (step, &(u, v)) in cert.edges.iter().enumerate() {
        if let Some(witness) = greedy_feasibility_witness(&mut state, u, v) {
            return Ok(Verdict::fail(step, witness, stats));
        }
        let mut best: Option<(DistKey, usize, usize)> = None;
        for a in 0..n {
            for b in (a + 1)..n {
                if state.eligible_greedy(a, b) {
                    let key = instance.dist_key(a, b)?;
                    if best.is_none_or(|(bk, _, _)| key < bk) {
                        best = Some((key, a, b));
                    }
                }
            }
        }
        let (min_key, min_u, min_v) =
            best.expect("the feasible certificate edge itself is eligible");
        if min_key < instance.dist_key(u, v)? {
            return Ok(Verdict::fail(
                step,
                Witness::CheaperEligibleEdge {
                    u: min_u,
                    v: min_v,
                    key: min_key,
                },
                stats,
            ));
        }
        state.record(u, v);
        push_stats(&mut stats, instance, u, v)?;
    }
    Ok(Verdict::pass(stats))
}

struct SavingsPair {
    savings: i64,
    a: usize,
    b: usize,
}

/// Verify that the certificate is a prefix of a valid Clarke-Wright run from
/// `hub`: each pair must be feasible and of maximum savings among all
/// currently feasible pairs (ties pass).
pub fn verify_cw_run(instance: &Instance, hub: usize, cert: &Certificate) -> Result<Verdict> {
    let n = instance.n();
    if hub >= n {
        return Err(Error::IdOutOfRange { id: hub, n });
    }
    validate_cert_edges(n, &cert.edges)?;
    for &(a, b) in &cert.edges {
        if a == hub || b == hub {
            return Err(Error::InvalidArgument(format!(
                "shortcut pair ({a},{b}) contains the hub city {hub}"
            )));
        }
    }

    let mut pairs = Vec::with_capacity((n - 1) * (n - 2) / 2);
    for a in 0..n {
        if a == hub {
            continue;
        }
        for b in (a + 1)..n {
            if b == hub {
                continue;
            }
            pairs.push(SavingsPair {
                savings: savings(instance, hub, a, b)?,
                a,
                b,
            });
        }
    }
    pairs.sort_unstable_by_key(|p| (std::cmp::Reverse(p.savings), p.a, p.b));

    let mut state = SelectionState::new(n);
    let mut stats = VerifyStats::default();
    let mut ptr = 0;
    for (step, &(a, b)) in cert.edges.iter().enumerate() {
        if state.degree(a) >= 2 {
            return Ok(Verdict::fail(step, Witness::DegreeExceeded { city: a }, stats));
        }
        if state.degree(b) >= 2 {
            return Ok(Verdict::fail(step, Witness::DegreeExceeded { city: b }, stats));
        }
        if state.same_component(a, b) {
            return Ok(Verdict::fail(step, Witness::ClosesCycle { u: a, v: b }, stats));
        }
        loop {
            let p = &pairs[ptr];
            if state.degree(p.a) >= 2 || state.degree(p.b) >= 2 || state.same_component(p.a, p.b)
            {
                ptr += 1;
                continue;
            }
            break;
        }
        let best = &pairs[ptr];
        let cert_savings = savings(instance, hub, a, b)?;
        if best.savings > cert_savings {
            return Ok(Verdict::fail(
                step,
                Witness::HigherSavingsPair {
                    a: best.a,
                    b: best.b,
                    savings: best.savings,
                },
                stats,
            ));
        }
        state.record(a, b);
        push_stats(&mut stats, instance, a, b)?;
    }
    Ok(Verdict::pass(stats))
}

fn is_power_of_three_up_to(value: u64, k: u32) -> bool {
    let mut p = 1u64;
    for _ in 0..=k {
        if value == p {
            return true;
        }
        p *= 3;
    }
    false
}

/// Apply a certificate structurally (no minimality checks) and report its
/// stats, auditing the family claims: coverage, endpoints, exact total, and
/// the admissible edge lengths.
pub fn certificate_stats(instance: &Instance, cert: &Certificate) -> Result<VerifyStats> {
    let n = instance.n();
    validate_cert_edges(n, &cert.edges)?;

    let mut issues: Vec<String> = Vec::new();
    let mut state = SelectionState::new(n);
    let mut stats = VerifyStats::default();
    for (step, &(u, v)) in cert.edges.iter().enumerate() {
        if state.degree(u) >= 2 || state.degree(v) >= 2 {
            return Err(Error::CertificateAudit {
                issues: vec![format!(
                    "step {step}: edge ({u},{v}) raises a city degree above 2"
                )],
            });
        }
        if state.same_component(u, v) {
            return Err(Error::CertificateAudit {
                issues: vec![format!("step {step}: edge ({u},{v}) closes a cycle")],
            });
        }
        state.record(u, v);
        push_stats(&mut stats, instance, u, v)?;
    }

    if stats.total_length_scaled != cert.expected_length_scaled {
        issues.push(format!(
            "total scaled length {} differs from the declared {}",
            stats.total_length_scaled, cert.expected_length_scaled
        ));
    }

    let scale = instance.scale();
    match cert.family {
        Family::Gk(k) | Family::CwGk(k) => {
            let grid_n = (3u64.pow(k + 2) - 1) as usize;
            let (expected_n, covered): (usize, usize) = match cert.family {
                Family::Gk(_) => (grid_n, grid_n),
                Family::CwGk(_) => (grid_n + 1, grid_n),
                Family::OneTwo(_) => unreachable!(),
            };
            if n != expected_n {
                issues.push(format!(
                    "instance has {n} cities, family expects {expected_n}"
                ));
            } else {
                if let Family::CwGk(_) = cert.family {
                    let hub = n - 1;
                    if state.degree(hub) != 0 {
                        issues.push(format!("hub city {hub} appears in a shortcut pair"));
                    }
                }
                if cert.edges.len() != covered - 1 {
                    issues.push(format!(
                        "certificate has {} edges, expected {}",
                        cert.edges.len(),
                        covered - 1
                    ));
                }
                if let Some(missed) = (0..covered).find(|&c| state.degree(c) == 0) {
                    issues.push(format!("certificate does not cover city {missed}"));
                }
                let meta = gk_meta(k);
                let mut endpoints: Vec<usize> =
                    (0..covered).filter(|&c| state.degree(c) == 1).collect();
                endpoints.sort_unstable();
                let mut expected_ends = vec![meta.s_id, meta.r_id];
                expected_ends.sort_unstable();
                if endpoints != expected_ends {
                    issues.push(format!(
                        "path endpoints {endpoints:?} differ from expected {expected_ends:?}"
                    ));
                }
                let expected_total = scale * gk_certificate_length(k);
                if stats.total_length_scaled != expected_total {
                    issues.push(format!(
                        "total scaled length {} differs from the family value {expected_total}",
                        stats.total_length_scaled
                    ));
                }
                for &len in stats.length_histogram.keys() {
                    if len % scale != 0 || !is_power_of_three_up_to(len / scale, k) {
                        issues.push(format!(
                            "edge length {len} (scaled) is not a power of 3 up to 3^{k}"
                        ));
                    }
                }
            }
        }
        Family::OneTwo(m) => {
            if n != m {
                issues.push(format!("instance has {n} cities, family expects {m}"));
            } else {
                let expected_edges = m.div_ceil(2);
                if cert.edges.len() != expected_edges {
                    issues.push(format!(
                        "certificate has {} edges, expected {expected_edges}",
                        cert.edges.len()
                    ));
                }
                for &len in stats.length_histogram.keys() {
                    if len != scale {
                        issues.push(format!("edge length {len} (scaled) is not 1"));
                    }
                }
                let expected_total = scale * expected_edges as u64;
                if stats.total_length_scaled != expected_total {
                    issues.push(format!(
                        "total scaled length {} differs from the family value {expected_total}",
                        stats.total_length_scaled
                    ));
                }
            }
        }
    }

    if issues.is_empty() {
        Ok(stats)
    } else {
        Err(Error::CertificateAudit { issues })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        cw_certificate, gen_cw_instance, gen_gk, gen_one_two, gk_certificate,
        one_two_certificate, GkKind,
    };

    #[test]
    fn gk_certificates_verify_on_graphic_instances() {
        for k in 0..=2 {
            let (inst, _) = gen_gk(k, GkKind::Graphic).unwrap();
            let cert = gk_certificate(k).unwrap();
            let verdict = verify_greedy_run(&inst, &cert).unwrap();
            assert!(verdict.passed(), "level {k}: {verdict}");
            assert_eq!(verdict.stats.total_length_scaled, gk_certificate_length(k));
        }
    }

    #[test]
    fn moving_a_long_edge_to_the_front_fails_at_step_zero() {
        let (inst, _) = gen_gk(1, GkKind::L1).unwrap();
        let mut cert = gk_certificate(1).unwrap();
        let last = cert.edges.pop().unwrap();
        cert.edges.insert(0, last);
        let verdict = verify_greedy_run(&inst, &cert).unwrap();
        match verdict.failure {
            Some(Failure {
                step: 0,
                witness: Witness::CheaperEligibleEdge { key, .. },
            }) => assert_eq!(key, DistKey(1)),
            other => panic!("expected a cheaper unit-edge witness, got {other:?}"),
        }
    }

    #[test]
    fn empty_certificate_passes_with_zero_stats() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let cert = Certificate {
            family: Family::Gk(0),
            edges: vec![],
            expected_length_scaled: 0,
        };
        let verdict = verify_greedy_run(&inst, &cert).unwrap();
        assert!(verdict.passed());
        assert_eq!(verdict.stats.edge_count, 0);

        let (cw_inst, _, hub) = gen_cw_instance(0).unwrap();
        let cw_cert = Certificate {
            family: Family::CwGk(0),
            edges: vec![],
            expected_length_scaled: 0,
        };
        let verdict = verify_cw_run(&cw_inst, hub.hub_id, &cw_cert).unwrap();
        assert!(verdict.passed());
    }

    #[test]
    fn duplicate_edge_is_a_hard_error() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let mut cert = gk_certificate(0).unwrap();
        let first = cert.edges[0];
        cert.edges.push(first);
        assert!(matches!(
            verify_greedy_run(&inst, &cert),
            Err(Error::DuplicateEdge { .. })
        ));
    }

    #[test]
    fn out_of_range_id_is_a_hard_error() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let mut cert = gk_certificate(0).unwrap();
        cert.edges[0] = (0, 99);
        assert!(matches!(
            verify_greedy_run(&inst, &cert),
            Err(Error::IdOutOfRange { .. })
        ));
    }

    #[test]
    fn cw_certificates_verify() {
        for k in 0..=2 {
            let (inst, _, hub) = gen_cw_instance(k).unwrap();
            let cert = cw_certificate(k).unwrap();
            let verdict = verify_cw_run(&inst, hub.hub_id, &cert).unwrap();
            assert!(verdict.passed(), "level {k}: {verdict}");
        }
    }

    #[test]
    fn low_savings_pair_first_fails_with_higher_savings_witness() {
        let (inst, _, hub) = gen_cw_instance(1).unwrap();
        let mut cert = cw_certificate(1).unwrap();
        let last = cert.edges.pop().unwrap();
        cert.edges.insert(0, last);
        let verdict = verify_cw_run(&inst, hub.hub_id, &cert).unwrap();
        match verdict.failure {
            Some(Failure {
                step: 0,
                witness: Witness::HigherSavingsPair { savings, .. },
            }) => {
                // a unit pair saves 2*27 - 2 = 52; the misplaced pair saves 48
                assert_eq!(savings, 52);
            }
            other => panic!("expected higher-savings witness, got {other:?}"),
        }
    }

    #[test]
    fn stats_level2_certificate() {
        let (inst, _) = gen_gk(2, GkKind::L1).unwrap();
        let cert = gk_certificate(2).unwrap();
        let stats = certificate_stats(&inst, &cert).unwrap();
        assert_eq!(stats.total_length_scaled, 107);
        let lengths: Vec<u64> = stats.length_histogram.keys().copied().collect();
        assert_eq!(lengths, vec![1, 3, 9]);
    }

    #[test]
    fn stats_level1_histogram() {
        let (inst, _) = gen_gk(1, GkKind::L1).unwrap();
        let cert = gk_certificate(1).unwrap();
        let stats = certificate_stats(&inst, &cert).unwrap();
        assert_eq!(stats.length_histogram.get(&1), Some(&23));
        assert_eq!(stats.length_histogram.get(&3), Some(&2));
    }

    #[test]
    fn stats_one_two_certificate() {
        let inst = gen_one_two(7).unwrap();
        let cert = one_two_certificate(7).unwrap();
        let stats = certificate_stats(&inst, &cert).unwrap();
        assert_eq!(stats.total_length_scaled, 4);
        assert_eq!(stats.length_histogram.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn stats_flags_wrong_totals() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let mut cert = gk_certificate(0).unwrap();
        cert.edges.pop();
        match certificate_stats(&inst, &cert) {
            Err(Error::CertificateAudit { issues }) => assert!(!issues.is_empty()),
            other => panic!("expected audit failure, got {other:?}"),
        }
    }
}
