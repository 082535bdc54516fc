//! Cities, metrics, and exact distance comparison keys.
//!
//! All heuristic decisions in this crate compare [`DistKey`] values, never
//! floating-point lengths. For an Lp metric the key of an edge is the p-th
//! power of its length, which is an integer on integer coordinates and
//! preserves the length ordering. Graphic and explicit metrics store scaled
//! integer lengths directly.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Cap for the all-pairs shortest-path computation behind graphic metrics.
pub const GRAPHIC_ALL_PAIRS_CAP: usize = 10_000;
/// Cap for the O(n^3) triangle-inequality check.
pub const VALIDATE_METRIC_CAP: usize = 2_000;

/// Sentinel hop count for unreachable city pairs in a graphic metric.
const UNREACHABLE: u64 = u64::MAX;

/// A city position on the two-row integer grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    /// `y` must be 0 (bottom row) or 1 (top row).
    pub fn new(x: u32, y: u32) -> Result<Self> {
        if y > 1 {
            return Err(Error::InvalidArgument(format!(
                "grid row must be 0 or 1, got {y}"
            )));
        }
        Ok(GridPoint { x, y })
    }
}

/// Exact, totally ordered comparison key for an edge length within one
/// instance. Keys from different instances must never be compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistKey(pub u128);

impl DistKey {
    pub const ZERO: DistKey = DistKey(0);
}

/// A scaled edge length: exact integer where representable, otherwise a
/// floating-point approximation flagged as inexact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Length {
    Exact(u64),
    Approx(f64),
}

impl Length {
    pub fn as_f64(self) -> f64 {
        match self {
            Length::Exact(v) => v as f64,
            Length::Approx(x) => x,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            Length::Exact(v) => Some(v),
            Length::Approx(_) => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Length::Exact(_))
    }
}

impl std::ops::Add for Length {
    type Output = Length;

    fn add(self, other: Length) -> Length {
        match (self, other) {
            (Length::Exact(a), Length::Exact(b)) => Length::Exact(a + b),
            _ => Length::Approx(self.as_f64() + other.as_f64()),
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Exact(v) => write!(f, "{v}"),
            Length::Approx(x) => write!(f, "~{x:.4}"),
        }
    }
}

/// Dense symmetric matrix of scaled integer lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<u64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "matrix row has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v;
    }
}

/// The distance model of an instance.
#[derive(Clone, Debug)]
pub enum MetricKind {
    /// Coordinate metric under the Lp norm for a positive integer p.
    Lp { p: u32 },
    /// Shortest-path hop distances of an unweighted graph over the cities.
    Graphic { adjacency: Vec<Vec<usize>> },
    /// Explicit symmetric matrix of scaled integer lengths.
    Explicit { matrix: SquareMatrix },
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Lp { p: 1 } => "l1",
            MetricKind::Lp { p: 2 } => "l2",
            MetricKind::Lp { .. } => "lp",
            MetricKind::Graphic { .. } => "graphic",
            MetricKind::Explicit { .. } => "explicit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Metric {
    pub kind: MetricKind,
    /// All stored lengths are true lengths times this factor.
    pub scale: u64,
}

/// An immutable TSP instance: cities plus a metric.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    n: usize,
    coords: Option<Vec<GridPoint>>,
    metric: Metric,
    graphic_cache: OnceLock<SquareMatrix>,
}

impl Instance {
    /// Coordinate instance under the Lp norm (scale is always 1).
    pub fn new_lp(name: impl Into<String>, p: u32, coords: Vec<GridPoint>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("Lp norm requires p >= 1".into()));
        }
        check_coords(&coords)?;
        Ok(Instance {
            name: name.into(),
            n: coords.len(),
            coords: Some(coords),
            metric: Metric {
                kind: MetricKind::Lp { p },
                scale: 1,
            },
            graphic_cache: OnceLock::new(),
        })
    }

    /// Graphic instance over an unweighted edge list (scale is always 1).
    pub fn new_graphic(
        name: impl Into<String>,
        n: usize,
        edges: &[(usize, usize)],
        coords: Option<Vec<GridPoint>>,
    ) -> Result<Self> {
        if let Some(c) = &coords {
            check_coords(c)?;
            if c.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "{} coordinates for {n} cities",
                    c.len()
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            check_id(u, n)?;
            check_id(v, n)?;
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at city {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Instance {
            name: name.into(),
            n,
            coords,
            metric: Metric {
                kind: MetricKind::Graphic { adjacency },
                scale: 1,
            },
            graphic_cache: OnceLock::new(),
        })
    }

    /// Explicit-matrix instance. The matrix must be symmetric with a zero
    /// diagonal; the triangle inequality is checked separately by
    /// [`validate_metric`].
    pub fn new_explicit(
        name: impl Into<String>,
        matrix: SquareMatrix,
        scale: u64,
        coords: Option<Vec<GridPoint>>,
    ) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        let n = matrix.n();
        if let Some(c) = &coords {
            check_coords(c)?;
            if c.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "{} coordinates for {n} cities",
                    c.len()
                )));
            }
        }
        for i in 0..n {
            if matrix.get(i, i) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "matrix diagonal entry ({i},{i}) is {}, expected 0",
                    matrix.get(i, i)
                )));
            }
            for j in (i + 1)..n {
                if matrix.get(i, j) != matrix.get(j, i) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Instance {
            name: name.into(),
            n,
            coords,
            metric: Metric {
                kind: MetricKind::Explicit { matrix },
                scale,
            },
            graphic_cache: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> Option<&[GridPoint]> {
        self.coords.as_deref()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn scale(&self) -> u64 {
        self.metric.scale
    }

    /// True when every edge length of this metric kind is an exact scaled
    /// integer (L1, graphic, explicit).
    pub fn has_exact_lengths(&self) -> bool {
        match &self.metric.kind {
            MetricKind::Lp { p } => *p == 1,
            MetricKind::Graphic { .. } | MetricKind::Explicit { .. } => true,
        }
    }

    fn hop_matrix(&self) -> &SquareMatrix {
        let MetricKind::Graphic { adjacency } = &self.metric.kind else {
            unreachable!("hop_matrix is only called for graphic instances");
        };
        self.graphic_cache
            .get_or_init(|| bfs_all_pairs(adjacency, self.n))
    }

    /// Exact comparison key of the edge {u, v}.
    ///
    /// Symmetric, zero iff `u == v`. For Lp metrics this is the p-th power of
    /// the length; for graphic and explicit metrics it is the scaled length.
    pub fn dist_key(&self, u: usize, v: usize) -> Result<DistKey> {
        check_id(u, self.n)?;
        check_id(v, self.n)?;
        if u == v {
            return Ok(DistKey::ZERO);
        }
        match &self.metric.kind {
            MetricKind::Lp { p } => {
                let c = self.coords.as_ref().expect("Lp instances carry coords");
                let dx = u64::from(c[u].x.abs_diff(c[v].x));
                let dy = u64::from(c[u].y.abs_diff(c[v].y));
                Ok(DistKey(lp_key(dx, dy, *p)?))
            }
            MetricKind::Graphic { .. } => {
                let hops = self.hop_matrix().get(u, v);
                if hops == UNREACHABLE {
                    return Err(Error::Disconnected { u, v });
                }
                Ok(DistKey(u128::from(hops) * u128::from(self.metric.scale)))
            }
            MetricKind::Explicit { matrix } => Ok(DistKey(u128::from(matrix.get(u, v)))),
        }
    }

    /// Scaled length of the edge {u, v}, exact where representable.
    pub fn dist_value(&self, u: usize, v: usize) -> Result<Length> {
        check_id(u, self.n)?;
        check_id(v, self.n)?;
        if u == v {
            return Ok(Length::Exact(0));
        }
        match &self.metric.kind {
            MetricKind::Lp { p } => {
                let key = self.dist_key(u, v)?.0;
                if *p == 1 {
                    return Ok(Length::Exact(key as u64));
                }
                let root = integer_root(key, *p);
                if root.checked_pow(*p) == Some(key) {
                    Ok(Length::Exact(root as u64))
                } else {
                    Ok(Length::Approx((key as f64).powf(1.0 / f64::from(*p))))
                }
            }
            MetricKind::Graphic { .. } | MetricKind::Explicit { .. } => {
                Ok(Length::Exact(self.dist_key(u, v)?.0 as u64))
            }
        }
    }

    /// Comparison key an axis-aligned pair at true length `len` would have in
    /// this instance. Used to compare arbitrary keys against integer lengths.
    pub fn axis_len_key(&self, len: u64) -> Result<DistKey> {
        match &self.metric.kind {
            MetricKind::Lp { p } => Ok(DistKey(lp_key(len, 0, *p)?)),
            MetricKind::Graphic { .. } | MetricKind::Explicit { .. } => {
                Ok(DistKey(u128::from(len) * u128::from(self.metric.scale)))
            }
        }
    }

    /// Materialize the full scaled length matrix. Fails if any pairwise
    /// length is inexact.
    pub fn to_exact_matrix(&self) -> Result<SquareMatrix> {
        let mut m = SquareMatrix::zeros(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                match self.dist_value(u, v)? {
                    Length::Exact(d) => {
                        m.set(u, v, d);
                        m.set(v, u, d);
                    }
                    Length::Approx(_) => {
                        return Err(Error::InexactLength(format!(
                            "pair ({u}, {v}) has non-integer length"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }
}

fn check_id(id: usize, n: usize) -> Result<()> {
    if id >= n {
        Err(Error::IdOutOfRange { id, n })
    } else {
        Ok(())
    }
}

fn check_coords(coords: &[GridPoint]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::InvalidArgument("empty coordinate list".into()));
    }
    let mut seen = std::collections::HashSet::with_capacity(coords.len());
    for p in coords {
        if p.y > 1 {
            return Err(Error::InvalidArgument(format!(
                "grid row must be 0 or 1, got {}",
                p.y
            )));
        }
        if !seen.insert((p.x, p.y)) {
            return Err(Error::InvalidArgument(format!(
                "duplicate coordinate ({}, {})",
                p.x, p.y
            )));
        }
    }
    Ok(())
}

fn lp_key(dx: u64, dy: u64, p: u32) -> Result<u128> {
    let pow = |b: u64| -> Result<u128> {
        u128::from(b).checked_pow(p).ok_or_else(|| {
            Error::KeyOverflow(format!("{b}^{p} does not fit in the key type"))
        })
    };
    pow(dx)?
        .checked_add(pow(dy)?)
        .ok_or_else(|| Error::KeyOverflow(format!("{dx}^{p} + {dy}^{p} overflows")))
}

/// Largest r with r^p <= value.
fn integer_root(value: u128, p: u32) -> u128 {
    if p == 1 || value <= 1 {
        return value;
    }
    let mut r = (value as f64).powf(1.0 / f64::from(p)).round() as u128;
    while r > 0 && r.checked_pow(p).is_none_or(|x| x > value) {
        r -= 1;
    }
    while (r + 1).checked_pow(p).is_some_and(|x| x <= value) {
        r += 1;
    }
    r
}

fn bfs_hops(adjacency: &[Vec<usize>], src: usize) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; adjacency.len()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn bfs_all_pairs(adjacency: &[Vec<usize>], n: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    for src in 0..n {
        let row = bfs_hops(adjacency, src);
        for (v, d) in row.into_iter().enumerate() {
            m.set(src, v, d);
        }
    }
    m
}

/// All-pairs hop distances of an unweighted graph given as adjacency lists.
/// Errors on a disconnected graph, naming an unreachable pair.
pub fn graphic_all_pairs(adjacency: &[Vec<usize>]) -> Result<SquareMatrix> {
    let n = adjacency.len();
    if n > GRAPHIC_ALL_PAIRS_CAP {
        return Err(Error::SizeCap {
            what: "graphic all-pairs city count",
            cap: GRAPHIC_ALL_PAIRS_CAP,
            got: n,
        });
    }
    let m = bfs_all_pairs(adjacency, n);
    for u in 0..n {
        for v in 0..n {
            if m.get(u, v) == UNREACHABLE {
                return Err(Error::Disconnected { u, v });
            }
        }
    }
    Ok(m)
}

/// Outcome of [`validate_metric`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricVerdict {
    Pass,
    Fail(MetricViolation),
}

impl MetricVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MetricVerdict::Pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricViolation {
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    /// d(i,k) > d(i,j) + d(j,k) for the reported triple.
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::Asymmetric { i, j } => write!(f, "matrix asymmetric at ({i},{j})"),
            MetricViolation::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            MetricViolation::Triangle { i, j, k } => {
                write!(f, "triangle inequality violated at ({i},{j},{k})")
            }
        }
    }
}

/// Check symmetry, zero diagonal, and the triangle inequality over all
/// ordered triples. Returns the first violation found.
pub fn validate_metric(matrix: &SquareMatrix) -> Result<MetricVerdict> {
    let n = matrix.n();
    if n > VALIDATE_METRIC_CAP {
        return Err(Error::SizeCap {
            what: "metric validation city count",
            cap: VALIDATE_METRIC_CAP,
            got: n,
        });
    }
    for i in 0..n {
        if matrix.get(i, i) != 0 {
            return Ok(MetricVerdict::Fail(MetricViolation::NonzeroDiagonal { i }));
        }
        for j in (i + 1)..n {
            if matrix.get(i, j) != matrix.get(j, i) {
                return Ok(MetricVerdict::Fail(MetricViolation::Asymmetric { i, j }));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = matrix.get(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if matrix.get(i, k) > dij + matrix.get(j, k) {
                    return Ok(MetricVerdict::Fail(MetricViolation::Triangle { i, j, k }));
                }
            }
        }
    }
    Ok(MetricVerdict::Pass)
}

/// Outcome of [`validate_gk_conditions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GkVerdict {
    Pass,
    Fail(GkViolation),
}

impl GkVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, GkVerdict::Pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GkViolation {
    /// A same-row or same-column pair whose length is not the euclidean
    /// distance between the points.
    AxisDistance { u: usize, v: usize, expected: u64 },
    /// A cross pair shorter than the difference of its x-coordinates.
    CrossTooShort { u: usize, v: usize, min_len: u64 },
}

impl fmt::Display for GkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GkViolation::AxisDistance { u, v, expected } => write!(
                f,
                "pair ({u},{v}) must have exact axis distance {expected}"
            ),
            GkViolation::CrossTooShort { u, v, min_len } => {
                write!(f, "pair ({u},{v}) is shorter than |dx| = {min_len}")
            }
        }
    }
}

/// Check the two structural conditions the two-row grid family imposes on a
/// metric: axis-aligned pairs have exact euclidean distance, and every other
/// pair is at least as long as its x-coordinate difference.
pub fn validate_gk_conditions(instance: &Instance, k: u32) -> Result<GkVerdict> {
    let coords = instance.coords().ok_or_else(|| {
        Error::InvalidArgument("instance has no coordinates to validate against".into())
    })?;
    let expected_n = 3u64.pow(k + 2) - 1;
    if instance.n() as u64 != expected_n {
        return Err(Error::InvalidArgument(format!(
            "instance has {} cities, level {k} grid has {expected_n}",
            instance.n()
        )));
    }
    let width = (expected_n / 2) as u32; // (3^(k+2)-1)/2 columns
    let mut seen = vec![false; instance.n()];
    for p in coords {
        if p.x >= width {
            return Err(Error::InvalidArgument(format!(
                "coordinate ({}, {}) outside the level {k} grid of width {width}",
                p.x, p.y
            )));
        }
        seen[(p.x as usize) * 2 + p.y as usize] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidArgument(format!(
            "coordinates do not cover the full 2 x {width} grid"
        )));
    }

    for u in 0..instance.n() {
        for v in (u + 1)..instance.n() {
            let (a, b) = (coords[u], coords[v]);
            let key = instance.dist_key(u, v)?;
            if a.x == b.x || a.y == b.y {
                let axis = if a.x == b.x {
                    u64::from(a.y.abs_diff(b.y))
                } else {
                    u64::from(a.x.abs_diff(b.x))
                };
                if key != instance.axis_len_key(axis)? {
                    return Ok(GkVerdict::Fail(GkViolation::AxisDistance {
                        u,
                        v,
                        expected: axis,
                    }));
                }
            } else {
                let dx = u64::from(a.x.abs_diff(b.x));
                if key < instance.axis_len_key(dx)? {
                    return Ok(GkVerdict::Fail(GkViolation::CrossTooShort {
                        u,
                        v,
                        min_len: dx,
                    }));
                }
            }
        }
    }
    Ok(GkVerdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(points: &[(u32, u32)]) -> Vec<GridPoint> {
        points
            .iter()
            .map(|&(x, y)| GridPoint::new(x, y).unwrap())
            .collect()
    }

    /// 2x4 grid in column-major id order: id = 2x + y.
    fn v0_coords() -> Vec<GridPoint> {
        let mut pts = Vec::new();
        for x in 0..4 {
            for y in 0..2 {
                pts.push(GridPoint::new(x, y).unwrap());
            }
        }
        pts
    }

    fn v0_unit_edges() -> Vec<(usize, usize)> {
        let id = |x: usize, y: usize| 2 * x + y;
        let mut edges = Vec::new();
        for x in 0..4 {
            edges.push((id(x, 0), id(x, 1)));
            if x + 1 < 4 {
                edges.push((id(x, 0), id(x + 1, 0)));
                edges.push((id(x, 1), id(x + 1, 1)));
            }
        }
        edges
    }

    #[test]
    fn l1_key_is_manhattan_distance() {
        let inst = Instance::new_lp("t", 1, grid(&[(0, 1), (3, 0)])).unwrap();
        assert_eq!(inst.dist_key(0, 1).unwrap(), DistKey(4));
    }

    #[test]
    fn l2_key_is_squared_distance() {
        let inst = Instance::new_lp("t", 2, grid(&[(0, 0), (3, 1)])).unwrap();
        assert_eq!(inst.dist_key(0, 1).unwrap(), DistKey(10));
    }

    #[test]
    fn graphic_key_is_hop_count() {
        // Independent oracle: hand-run BFS on the 2x4 grid graph gives
        // hop distance 4 between (0,1) and (3,0).
        let inst = Instance::new_graphic("g0", 8, &v0_unit_edges(), Some(v0_coords())).unwrap();
        let u = 1; // (0,1)
        let v = 6; // (3,0)
        assert_eq!(inst.dist_key(u, v).unwrap(), DistKey(4));
    }

    #[test]
    fn dist_value_same_row_is_exact() {
        let inst = Instance::new_lp("t", 2, grid(&[(1, 1), (4, 1)])).unwrap();
        assert_eq!(inst.dist_value(0, 1).unwrap(), Length::Exact(3));
    }

    #[test]
    fn dist_value_cross_pair_is_inexact() {
        let inst = Instance::new_lp("t", 2, grid(&[(0, 0), (3, 1)])).unwrap();
        match inst.dist_value(0, 1).unwrap() {
            Length::Approx(x) => assert!((x - 10f64.sqrt()).abs() < 1e-12),
            other => panic!("expected inexact length, got {other:?}"),
        }
    }

    #[test]
    fn explicit_scale_two_reports_scaled_integer() {
        let mut m = SquareMatrix::zeros(2);
        m.set(0, 1, 9);
        m.set(1, 0, 9);
        let inst = Instance::new_explicit("t", m, 2, None).unwrap();
        // scaled 9 at scale 2 is a true length of 4.5
        assert_eq!(inst.dist_value(0, 1).unwrap(), Length::Exact(9));
        assert_eq!(inst.scale(), 2);
    }

    #[test]
    fn graphic_all_pairs_path_graph() {
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        let m = graphic_all_pairs(&adj).unwrap();
        assert_eq!(m.get(0, 2), 2);
        assert_eq!(m.get(0, 1), 1);
    }

    #[test]
    fn graphic_all_pairs_single_edge() {
        let adj = vec![vec![1], vec![0]];
        let m = graphic_all_pairs(&adj).unwrap();
        assert_eq!(m.get(0, 1), 1);
    }

    #[test]
    fn graphic_all_pairs_disconnected_names_pair() {
        let adj = vec![vec![1], vec![0], vec![]];
        match graphic_all_pairs(&adj) {
            Err(Error::Disconnected { v: 2, .. }) | Err(Error::Disconnected { u: 2, .. }) => {}
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn graphic_matches_l1_on_grid() {
        let graphic =
            Instance::new_graphic("g0", 8, &v0_unit_edges(), Some(v0_coords())).unwrap();
        let l1 = Instance::new_lp("l1", 1, v0_coords()).unwrap();
        for u in 0..8 {
            for v in 0..8 {
                assert_eq!(graphic.dist_key(u, v).unwrap(), l1.dist_key(u, v).unwrap());
            }
        }
    }

    #[test]
    fn validate_metric_all_ones_passes() {
        let mut m = SquareMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m.set(i, j, 1);
                }
            }
        }
        assert!(validate_metric(&m).unwrap().passed());
    }

    #[test]
    fn validate_metric_reports_violating_triple() {
        let mut m = SquareMatrix::zeros(3);
        let mut put = |i: usize, j: usize, v: u64| {
            m.set(i, j, v);
            m.set(j, i, v);
        };
        put(0, 1, 1);
        put(1, 2, 1);
        put(0, 2, 3);
        match validate_metric(&m).unwrap() {
            MetricVerdict::Fail(MetricViolation::Triangle { i, j, k }) => {
                // d(i,k) > d(i,j) + d(j,k) must actually hold for the witness
                assert!(m.get(i, k) > m.get(i, j) + m.get(j, k));
            }
            other => panic!("expected triangle failure, got {other:?}"),
        }
    }

    #[test]
    fn shortest_path_matrices_are_metric() {
        let adj = vec![vec![1, 2], vec![0, 3], vec![0], vec![1]];
        let m = graphic_all_pairs(&adj).unwrap();
        assert!(validate_metric(&m).unwrap().passed());
    }

    #[test]
    fn dist_key_symmetry_and_zero() {
        let inst = Instance::new_lp("t", 3, grid(&[(0, 0), (5, 1), (2, 1)])).unwrap();
        for u in 0..3 {
            assert_eq!(inst.dist_key(u, u).unwrap(), DistKey::ZERO);
            for v in 0..3 {
                assert_eq!(inst.dist_key(u, v).unwrap(), inst.dist_key(v, u).unwrap());
            }
        }
    }

    #[test]
    fn out_of_range_id_is_rejected() {
        let inst = Instance::new_lp("t", 1, grid(&[(0, 0), (1, 0), (2, 0)])).unwrap();
        assert!(matches!(
            inst.dist_key(0, 3),
            Err(Error::IdOutOfRange { id: 3, n: 3 })
        ));
    }

    #[test]
    fn integer_root_edges() {
        assert_eq!(integer_root(10, 2), 3);
        assert_eq!(integer_root(9, 2), 3);
        assert_eq!(integer_root(0, 5), 0);
        assert_eq!(integer_root(1, 7), 1);
        assert_eq!(integer_root(27, 3), 3);
        assert_eq!(integer_root(26, 3), 2);
    }
}
