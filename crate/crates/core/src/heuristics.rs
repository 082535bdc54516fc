//! Greedy edge selection and the Clarke-Wright savings heuristic.
//!
//! Both heuristics are deterministic given a tie-break policy. All length
//! comparisons go through exact integer keys; no floating point is involved
//! in any selection decision.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::instances::Certificate;
use crate::metrics::{DistKey, Instance, Length};

/// Union-find over city ids with path halving and union by rank.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut x = x as u32;
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x as usize
    }

    /// Returns false when both ids already share a set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }
}

/// Working state of an edge-selection run: per-city degrees, connectivity
/// classes, and the chosen edges in acceptance order.
#[derive(Clone, Debug)]
pub struct SelectionState {
    n: usize,
    degree: Vec<u8>,
    sets: DisjointSets,
    chosen: Vec<(usize, usize)>,
}

impl SelectionState {
    pub fn new(n: usize) -> Self {
        SelectionState {
            n,
            degree: vec![0; n],
            sets: DisjointSets::new(n),
            chosen: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> u8 {
        self.degree[v]
    }

    pub fn chosen(&self) -> &[(usize, usize)] {
        &self.chosen
    }

    pub fn same_component(&mut self, u: usize, v: usize) -> bool {
        self.sets.find(u) == self.sets.find(v)
    }

    /// Greedy eligibility: both endpoints below degree 2 and the edge joins
    /// two components, except that the unique cycle-closing edge becomes
    /// eligible once n-1 edges are chosen.
    pub fn eligible_greedy(&mut self, u: usize, v: usize) -> bool {
        self.degree[u] < 2
            && self.degree[v] < 2
            && (self.chosen.len() == self.n - 1 || !self.same_component(u, v))
    }

    /// Clarke-Wright shortcut feasibility: both cities still have a hub edge
    /// to give up and the pair does not close a cycle among non-hub cities.
    pub fn feasible_shortcut(&mut self, a: usize, b: usize) -> bool {
        self.degree[a] < 2 && self.degree[b] < 2 && !self.same_component(a, b)
    }

    /// Record an accepted edge. The caller is responsible for having checked
    /// eligibility; degrees and components are updated unconditionally.
    pub fn record(&mut self, u: usize, v: usize) {
        self.degree[u] += 1;
        self.degree[v] += 1;
        self.sets.union(u, v);
        self.chosen.push(crate::instances::normalize_edge(u, v));
    }

    /// The two cities of degree below 2. Defined once the state is a single
    /// spanning path (n-1 edges and no cycle).
    pub fn open_ends(&self) -> Option<(usize, usize)> {
        let mut ends = self.degree.iter().enumerate().filter(|&(_, &d)| d < 2);
        let a = ends.next()?.0;
        let b = ends.next()?.0;
        if ends.next().is_some() {
            return None;
        }
        Some((a, b))
    }
}

/// Deterministic refinement of the order among equal-weight candidate edges.
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// Prefer the lexicographically smallest (min id, max id) pair.
    Lexicographic,
    /// Prefer edges of the certificate, in certificate order, then fall back
    /// to the lexicographic order.
    CertificateFirst(Certificate),
    /// Prefer edges by a seeded pseudo-random priority.
    SeededRandom(u64),
}

impl TieBreak {
    /// Rank every edge of the (lexicographically ordered) candidate list.
    /// Lower ranks win ties; the (u, v) pair is the final fallback.
    fn ranks(&self, edges: &[(usize, usize)]) -> Vec<u32> {
        match self {
            TieBreak::Lexicographic => vec![0; edges.len()],
            TieBreak::CertificateFirst(cert) => {
                let position: HashMap<(usize, usize), u32> = cert
                    .edges
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (e, i as u32))
                    .collect();
                edges
                    .iter()
                    .map(|e| position.get(e).copied().unwrap_or(u32::MAX))
                    .collect()
            }
            TieBreak::SeededRandom(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                edges.iter().map(|_| rng.next_u32()).collect()
            }
        }
    }
}

/// One acceptance event of a heuristic run. `weight` is the distance key for
/// greedy runs and the savings value for Clarke-Wright runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub u: usize,
    pub v: usize,
    pub weight: i128,
}

/// A Hamiltonian cycle with its scaled length and acceptance trace.
#[derive(Clone, Debug)]
pub struct Tour {
    /// Cities in cyclic visiting order, starting at city 0.
    pub order: Vec<usize>,
    pub length: Length,
    pub trace: Vec<TraceStep>,
}

fn cycle_order(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adjacent = vec![Vec::with_capacity(2); n];
    for &(u, v) in edges {
        adjacent[u].push(v);
        adjacent[v].push(u);
    }
    let mut order = Vec::with_capacity(n);
    let mut prev = usize::MAX;
    let mut cur = 0;
    // walk toward the smaller neighbor first so the orientation is canonical
    for _ in 0..n {
        order.push(cur);
        let (a, b) = (adjacent[cur][0], adjacent[cur][1]);
        let next = if a == prev {
            b
        } else if b == prev {
            a
        } else {
            a.min(b)
        };
        prev = cur;
        cur = next;
    }
    order
}

fn tour_length(instance: &Instance, order: &[usize]) -> Result<Length> {
    let mut total = Length::Exact(0);
    for i in 0..order.len() {
        let u = order[i];
        let v = order[(i + 1) % order.len()];
        total = total + instance.dist_value(u, v)?;
    }
    Ok(total)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    edges
}

struct KeyedEdge {
    key: DistKey,
    rank: u32,
    u: usize,
    v: usize,
}

/// Run the greedy tour algorithm: repeatedly accept a minimum-key eligible
/// edge (ties resolved by the policy) until the cycle closes.
pub fn greedy_tour(instance: &Instance, tie: &TieBreak) -> Result<Tour> {
    let n = instance.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "greedy tour needs at least 3 cities, got {n}"
        )));
    }
    let pairs = all_pairs(n);
    let ranks = tie.ranks(&pairs);
    let mut edges = Vec::with_capacity(pairs.len());
    for (&(u, v), &rank) in pairs.iter().zip(ranks.iter()) {
        edges.push(KeyedEdge {
            key: instance.dist_key(u, v)?,
            rank,
            u,
            v,
        });
    }
    edges.sort_unstable_by_key(|e| (e.key, e.rank, e.u, e.v));

    let mut state = SelectionState::new(n);
    let mut trace = Vec::with_capacity(n);
    // Ineligibility is permanent (degrees only grow, components only merge),
    // so a single skip pointer over the sorted list suffices. The closing
    // edge is handled separately.
    let mut ptr = 0;
    while state.chosen().len() < n {
        if state.chosen().len() == n - 1 {
            let (a, b) = state
                .open_ends()
                .expect("n-1 acyclic edges with degrees <= 2 form a spanning path");
            let key = instance.dist_key(a, b)?;
            state.record(a, b);
            trace.push(TraceStep {
                u: a.min(b),
                v: a.max(b),
                weight: key.0 as i128,
            });
            break;
        }
        loop {
            debug_assert!(ptr < edges.len(), "complete instances always have an eligible edge");
            let e = &edges[ptr];
            let dead = state.degree(e.u) >= 2
                || state.degree(e.v) >= 2
                || state.same_component(e.u, e.v);
            if dead {
                ptr += 1;
                continue;
            }
            state.record(e.u, e.v);
            trace.push(TraceStep {
                u: e.u,
                v: e.v,
                weight: e.key.0 as i128,
            });
            ptr += 1;
            break;
        }
    }

    let order = cycle_order(n, state.chosen());
    let length = tour_length(instance, &order)?;
    Ok(Tour {
        order,
        length,
        trace,
    })
}

fn require_exact_lengths(instance: &Instance, what: &str) -> Result<()> {
    if !instance.has_exact_lengths() {
        return Err(Error::InexactLength(format!(
            "{what} requires exact lengths (L1, graphic, or explicit metric)"
        )));
    }
    Ok(())
}

fn exact_len(instance: &Instance, u: usize, v: usize) -> Result<u64> {
    instance.dist_value(u, v)?.exact().ok_or_else(|| {
        Error::InexactLength(format!("pair ({u}, {v}) has non-integer length"))
    })
}

/// Savings of shortcutting the pair (a, b) past the hub:
/// c(a,hub) + c(b,hub) - c(a,b), in scaled units.
pub fn savings(instance: &Instance, hub: usize, a: usize, b: usize) -> Result<i64> {
    if a == b || a == hub || b == hub {
        return Err(Error::InvalidArgument(format!(
            "savings needs pairwise distinct cities, got hub={hub}, a={a}, b={b}"
        )));
    }
    require_exact_lengths(instance, "savings")?;
    let ah = exact_len(instance, a, hub)? as i128;
    let bh = exact_len(instance, b, hub)? as i128;
    let ab = exact_len(instance, a, b)? as i128;
    i64::try_from(ah + bh - ab)
        .map_err(|_| Error::KeyOverflow("savings value does not fit in i64".into()))
}

struct SavingsPair {
    savings: i64,
    rank: u32,
    a: usize,
    b: usize,
}

/// Run the Clarke-Wright savings heuristic from the given hub city: start
/// from a doubled hub star and process all non-hub pairs in nonincreasing
/// savings order, shortcutting each feasible pair.
pub fn clarke_wright(instance: &Instance, hub: usize, tie: &TieBreak) -> Result<Tour> {
    let n = instance.n();
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "Clarke-Wright needs at least 4 cities, got {n}"
        )));
    }
    if hub >= n {
        return Err(Error::IdOutOfRange { id: hub, n });
    }
    require_exact_lengths(instance, "Clarke-Wright")?;

    let pairs: Vec<(usize, usize)> = all_pairs(n)
        .into_iter()
        .filter(|&(a, b)| a != hub && b != hub)
        .collect();
    let ranks = tie.ranks(&pairs);
    let mut keyed = Vec::with_capacity(pairs.len());
    for (&(a, b), &rank) in pairs.iter().zip(ranks.iter()) {
        keyed.push(SavingsPair {
            savings: savings(instance, hub, a, b)?,
            rank,
            a,
            b,
        });
    }
    keyed.sort_unstable_by_key(|p| (std::cmp::Reverse(p.savings), p.rank, p.a, p.b));

    let mut state = SelectionState::new(n);
    let mut trace = Vec::new();
    for p in &keyed {
        if state.feasible_shortcut(p.a, p.b) {
            state.record(p.a, p.b);
            trace.push(TraceStep {
                u: p.a,
                v: p.b,
                weight: i128::from(p.savings),
            });
        }
    }
    debug_assert_eq!(
        state.chosen().len(),
        n - 2,
        "processing all pairs leaves a single path over the non-hub cities"
    );

    // The hub never appears in the shortcut state, so the path ends are the
    // two non-hub cities that kept a hub edge.
    let mut ends = (0..n).filter(|&c| c != hub && state.degree(c) < 2);
    let (e1, e2) = match (ends.next(), ends.next(), ends.next()) {
        (Some(a), Some(b), None) => (a, b),
        _ => {
            return Err(Error::InvalidArgument(
                "shortcut pass did not leave a single path".into(),
            ))
        }
    };
    let mut cycle_edges = state.chosen().to_vec();
    cycle_edges.push((e1, hub));
    cycle_edges.push((e2, hub));
    let order = cycle_order(n, &cycle_edges);
    let length = tour_length(instance, &order)?;
    Ok(Tour {
        order,
        length,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::held_karp;
    use crate::instances::{
        cw_certificate, gen_cw_instance, gen_gk, gen_one_two, gk_certificate,
        one_two_certificate, GkKind,
    };
    use crate::metrics::SquareMatrix;

    fn uniform_instance(n: usize, d: u64) -> Instance {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.set(i, j, d);
                }
            }
        }
        Instance::new_explicit(format!("uniform{n}"), m, 1, None).unwrap()
    }

    #[test]
    fn triangle_has_unique_tour() {
        let inst = uniform_instance(3, 1);
        for tie in [TieBreak::Lexicographic, TieBreak::SeededRandom(7)] {
            let tour = greedy_tour(&inst, &tie).unwrap();
            assert_eq!(tour.length, Length::Exact(3));
            assert_eq!(tour.order.len(), 3);
        }
    }

    #[test]
    fn gk0_certificate_first_tour_closes_at_ten() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let cert = gk_certificate(0).unwrap();
        let tour = greedy_tour(&inst, &TieBreak::CertificateFirst(cert.clone())).unwrap();
        // partial path of length 7 plus the closing edge of L1 length 3
        assert_eq!(tour.length, Length::Exact(10));
        let prefix: Vec<(usize, usize)> = tour.trace[..7].iter().map(|s| (s.u, s.v)).collect();
        assert_eq!(prefix, cert.edges);
    }

    #[test]
    fn one_two_certificate_first_tour() {
        let inst = gen_one_two(5).unwrap();
        let cert = one_two_certificate(5).unwrap();
        let tour = greedy_tour(&inst, &TieBreak::CertificateFirst(cert)).unwrap();
        assert_eq!(tour.length, Length::Exact(7));
    }

    #[test]
    fn greedy_trace_keys_are_nondecreasing() {
        let (inst, _) = gen_gk(1, GkKind::Graphic).unwrap();
        let tour = greedy_tour(&inst, &TieBreak::Lexicographic).unwrap();
        assert_eq!(tour.trace.len(), 26);
        for w in tour.trace.windows(2) {
            assert!(w[0].weight <= w[1].weight);
        }
    }

    #[test]
    fn greedy_is_deterministic_per_policy() {
        let inst = gen_one_two(9).unwrap();
        for tie in [TieBreak::Lexicographic, TieBreak::SeededRandom(123)] {
            let a = greedy_tour(&inst, &tie).unwrap();
            let b = greedy_tour(&inst, &tie).unwrap();
            assert_eq!(a.trace, b.trace);
            assert_eq!(a.order, b.order);
        }
    }

    #[test]
    fn greedy_rejects_tiny_instances() {
        let inst = uniform_instance(2, 1);
        assert!(greedy_tour(&inst, &TieBreak::Lexicographic).is_err());
    }

    #[test]
    fn savings_on_hub_instance() {
        let (inst, _, hub) = gen_cw_instance(0).unwrap();
        // unit grid pair: scaled length 2, both hub edges scaled 9
        assert_eq!(savings(&inst, hub.hub_id, 0, 1).unwrap(), 16);
    }

    #[test]
    fn savings_rejects_degenerate_pairs() {
        let (inst, _, hub) = gen_cw_instance(0).unwrap();
        assert!(savings(&inst, hub.hub_id, 3, 3).is_err());
        assert!(savings(&inst, hub.hub_id, hub.hub_id, 1).is_err());
    }

    #[test]
    fn savings_requires_exact_lengths() {
        let (inst, _) = gen_gk(0, GkKind::L2).unwrap();
        assert!(matches!(
            savings(&inst, 0, 1, 2),
            Err(Error::InexactLength(_))
        ));
    }

    #[test]
    fn clarke_wright_matches_optimum_at_level0() {
        let (inst, _, hub) = gen_cw_instance(0).unwrap();
        let cert = cw_certificate(0).unwrap();
        let tour = clarke_wright(&inst, hub.hub_id, &TieBreak::CertificateFirst(cert)).unwrap();
        // 7 unit shortcuts (scaled 14) plus two hub edges (scaled 18)
        assert_eq!(tour.length, Length::Exact(32));
        let opt = held_karp(&inst).unwrap();
        assert_eq!(opt.length_scaled, 32);
    }

    #[test]
    fn clarke_wright_accepts_n_minus_2_shortcuts() {
        for k in 0..=1 {
            let (inst, _, hub) = gen_cw_instance(k).unwrap();
            let tour = clarke_wright(&inst, hub.hub_id, &TieBreak::Lexicographic).unwrap();
            assert_eq!(tour.trace.len(), inst.n() - 2);
            assert_eq!(tour.order.len(), inst.n());
            let mut seen = vec![false; inst.n()];
            for &c in &tour.order {
                assert!(!seen[c]);
                seen[c] = true;
            }
        }
    }

    #[test]
    fn clarke_wright_uniform_distances() {
        let inst = uniform_instance(4, 5);
        let tour = clarke_wright(&inst, 0, &TieBreak::Lexicographic).unwrap();
        assert_eq!(tour.length, Length::Exact(20));
    }

    #[test]
    fn clarke_wright_certificate_prefix_matches() {
        for k in 0..=1 {
            let (inst, _, hub) = gen_cw_instance(k).unwrap();
            let cert = cw_certificate(k).unwrap();
            let tour =
                clarke_wright(&inst, hub.hub_id, &TieBreak::CertificateFirst(cert.clone()))
                    .unwrap();
            let accepted: Vec<(usize, usize)> = tour
                .trace
                .iter()
                .take(cert.edges.len())
                .map(|s| (s.u, s.v))
                .collect();
            assert_eq!(accepted, cert.edges);
        }
    }

    #[test]
    fn clarke_wright_savings_trace_is_nonincreasing() {
        let (inst, _, hub) = gen_cw_instance(1).unwrap();
        let tour = clarke_wright(&inst, hub.hub_id, &TieBreak::Lexicographic).unwrap();
        for w in tour.trace.windows(2) {
            assert!(w[0].weight >= w[1].weight);
        }
    }
}
