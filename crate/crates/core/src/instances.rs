//! Adversarial instance families, their execution certificates, and the
//! TSPLIB-subset interchange format.
//!
//! The two-row grid family `G_k` places 3^(k+2)-1 cities on a
//! 2 x ((3^(k+2)-1)/2) grid. Cities are id'ed column-major: `id = 2x + y`
//! with `y = 0` the bottom row. The distinguished city `s_k` sits at column
//! (3^(k+1)-1)/2 in the top row and `r_k` is the bottom-right corner.

use crate::error::{Error, Result};
use crate::metrics::{GridPoint, Instance, SquareMatrix};
use crate::metrics::graphic_all_pairs;

/// Largest supported level for the recursive grid families
/// (level 6 already has 6560 cities).
pub const MAX_LEVEL: u32 = 6;

/// Which adversarial family a certificate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Two-row grid family at the given level.
    Gk(u32),
    /// Hub extension of the grid family at the given level.
    CwGk(u32),
    /// 1-2 instance on the given (odd) number of cities.
    OneTwo(usize),
}

/// An ordered edge list claimed to be a prefix of a valid greedy (or savings)
/// execution on its family instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub family: Family,
    /// Normalized (min, max) city-id pairs in claimed acceptance order.
    pub edges: Vec<(usize, usize)>,
    pub expected_length_scaled: u64,
}

/// Metadata for a grid-family instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GkMeta {
    pub k: u32,
    pub width: u32,
    pub s_id: usize,
    pub r_id: usize,
}

/// Metadata for the hub instance of the Clarke-Wright family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HubMeta {
    pub hub_id: usize,
    pub hub_len_scaled: u64,
}

/// Metric choice for grid-family generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GkKind {
    L1,
    L2,
    Lp(u32),
    Graphic,
}

impl GkKind {
    fn tag(self) -> String {
        match self {
            GkKind::L1 => "l1".into(),
            GkKind::L2 => "l2".into(),
            GkKind::Lp(p) => format!("lp{p}"),
            GkKind::Graphic => "graphic".into(),
        }
    }
}

fn pow3(e: u32) -> u64 {
    3u64.pow(e)
}

fn check_level(k: u32) -> Result<()> {
    if k > MAX_LEVEL {
        return Err(Error::SizeCap {
            what: "grid family level",
            cap: MAX_LEVEL as usize,
            got: k as usize,
        });
    }
    Ok(())
}

/// Number of grid columns at level `k`.
pub fn gk_width(k: u32) -> u32 {
    ((pow3(k + 2) - 1) / 2) as u32
}

/// Column of `s_k` (0-indexed).
fn gk_s_column(k: u32) -> u32 {
    ((pow3(k + 1) - 1) / 2) as u32
}

/// City id of the grid point (x, y).
pub fn gk_city_id(x: u32, y: u32) -> usize {
    2 * x as usize + y as usize
}

/// Grid metadata for level `k` without generating the instance.
pub fn gk_meta(k: u32) -> GkMeta {
    let width = gk_width(k);
    GkMeta {
        k,
        width,
        s_id: gk_city_id(gk_s_column(k), 1),
        r_id: gk_city_id(width - 1, 0),
    }
}

/// Partial greedy tour length of the level-`k` certificate in true units.
pub fn gk_certificate_length(k: u32) -> u64 {
    (2 * u64::from(k) + 8) * pow3(k) - 1
}

fn gk_coords(width: u32) -> Vec<GridPoint> {
    let mut coords = Vec::with_capacity(2 * width as usize);
    for x in 0..width {
        for y in 0..2 {
            coords.push(GridPoint { x, y });
        }
    }
    coords
}

fn gk_unit_edges(width: u32) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for x in 0..width {
        edges.push((gk_city_id(x, 0), gk_city_id(x, 1)));
        if x + 1 < width {
            edges.push((gk_city_id(x, 0), gk_city_id(x + 1, 0)));
            edges.push((gk_city_id(x, 1), gk_city_id(x + 1, 1)));
        }
    }
    edges
}

/// Generate the level-`k` grid instance under the chosen metric. The graphic
/// kind connects each pair of cities at distance 1.
pub fn gen_gk(k: u32, kind: GkKind) -> Result<(Instance, GkMeta)> {
    check_level(k)?;
    let meta = gk_meta(k);
    let coords = gk_coords(meta.width);
    let name = format!("gk{k}_{}", kind.tag());
    let instance = match kind {
        GkKind::L1 => Instance::new_lp(name, 1, coords)?,
        GkKind::L2 => Instance::new_lp(name, 2, coords)?,
        GkKind::Lp(p) => Instance::new_lp(name, p, coords)?,
        GkKind::Graphic => {
            let n = coords.len();
            Instance::new_graphic(name, n, &gk_unit_edges(meta.width), Some(coords))?
        }
    };
    Ok((instance, meta))
}

type CoordEdge = ((u32, u32), (u32, u32));

fn coord_edge_len(e: &CoordEdge) -> u64 {
    // All certificate edges are axis-aligned, so the L1 length equals the
    // euclidean length.
    u64::from(e.0 .0.abs_diff(e.1 .0)) + u64::from(e.0 .1.abs_diff(e.1 .1))
}

/// Recursive certificate construction in grid coordinates.
///
/// Level 0 is the seven-edge path of the base 2x4 grid. Level k+1 starts
/// with the two unit edges flanking the bottom separator vertex, then the
/// three level-k sub-certificates (middle copy mirrored) merged in
/// nondecreasing edge length with ties broken by copy index, and closes with
/// the two length-3^(k+1) top-row edges joining the copies.
fn gk_cert_coord_edges(k: u32) -> Vec<CoordEdge> {
    if k == 0 {
        return vec![
            ((1, 1), (0, 1)),
            ((0, 1), (0, 0)),
            ((0, 0), (1, 0)),
            ((1, 0), (2, 0)),
            ((2, 0), (2, 1)),
            ((2, 1), (3, 1)),
            ((3, 1), (3, 0)),
        ];
    }
    let w = gk_width(k - 1);
    let s = gk_s_column(k - 1);
    let sub = gk_cert_coord_edges(k - 1);
    let place = |edge: &CoordEdge, f: &dyn Fn(u32) -> u32| -> CoordEdge {
        ((f(edge.0 .0), edge.0 .1), (f(edge.1 .0), edge.1 .1))
    };
    let copies: [Vec<CoordEdge>; 3] = [
        sub.clone(),
        sub.iter().map(|e| place(e, &|x| 2 * w - x)).collect(),
        sub.iter().map(|e| place(e, &|x| 2 * w + 1 + x)).collect(),
    ];

    let mut edges = vec![((w - 1, 0), (w, 0)), ((w, 0), (w + 1, 0))];

    let mut tagged: Vec<(u64, usize, usize, CoordEdge)> = Vec::new();
    for (copy_idx, copy) in copies.iter().enumerate() {
        for (pos, e) in copy.iter().enumerate() {
            tagged.push((coord_edge_len(e), copy_idx, pos, *e));
        }
    }
    tagged.sort_by_key(|&(len, copy_idx, pos, _)| (len, copy_idx, pos));
    edges.extend(tagged.into_iter().map(|(_, _, _, e)| e));

    edges.push(((s, 1), (w, 1)));
    edges.push(((2 * w - s, 1), (2 * w + 1 + s, 1)));
    edges
}

pub(crate) fn normalize_edge(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Certificate of a partial greedy execution on the level-`k` grid instance.
pub fn gk_certificate(k: u32) -> Result<Certificate> {
    check_level(k)?;
    let edges = gk_cert_coord_edges(k)
        .into_iter()
        .map(|((ax, ay), (bx, by))| normalize_edge(gk_city_id(ax, ay), gk_city_id(bx, by)))
        .collect();
    Ok(Certificate {
        family: Family::Gk(k),
        edges,
        expected_length_scaled: gk_certificate_length(k),
    })
}

/// Hub instance for the Clarke-Wright family: the graphic metric of the
/// level-`k` grid at scale 2, extended by a hub city whose edges all have
/// scaled length 3^(k+2) (true length half of that). The hub gets the last
/// city id.
pub fn gen_cw_instance(k: u32) -> Result<(Instance, GkMeta, HubMeta)> {
    check_level(k)?;
    let meta = gk_meta(k);
    let n_grid = 2 * meta.width as usize;
    let mut adjacency = vec![Vec::new(); n_grid];
    for (u, v) in gk_unit_edges(meta.width) {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let hops = graphic_all_pairs(&adjacency)?;

    let n = n_grid + 1;
    let hub = n_grid;
    let hub_len_scaled = pow3(k + 2);
    let mut matrix = SquareMatrix::zeros(n);
    for u in 0..n_grid {
        for v in 0..n_grid {
            matrix.set(u, v, 2 * hops.get(u, v));
        }
        matrix.set(u, hub, hub_len_scaled);
        matrix.set(hub, u, hub_len_scaled);
    }
    let instance = Instance::new_explicit(format!("cwgk{k}"), matrix, 2, None)?;
    Ok((
        instance,
        meta,
        HubMeta {
            hub_id: hub,
            hub_len_scaled,
        },
    ))
}

/// Shortcut certificate for the hub instance: the same pairs as the greedy
/// certificate, in the same order.
pub fn cw_certificate(k: u32) -> Result<Certificate> {
    let base = gk_certificate(k)?;
    Ok(Certificate {
        family: Family::CwGk(k),
        edges: base.edges,
        expected_length_scaled: 2 * gk_certificate_length(k),
    })
}

pub(crate) fn check_one_two_n(n: usize) -> Result<()> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "1-2 family needs an odd city count of at least 5, got {n}"
        )));
    }
    Ok(())
}

/// 1-2 instance on `n` (odd) cities: unit length on the cycle edges
/// {i, i+1}, {0, n-1} and on the pairs {j, j+2} with j even; length 2
/// elsewhere. Ids are 0-indexed; texts that number cities from 1 map city i
/// to id i-1.
pub fn gen_one_two(n: usize) -> Result<Instance> {
    check_one_two_n(n)?;
    let mut matrix = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                matrix.set(i, j, 2);
            }
        }
    }
    let mut unit = |i: usize, j: usize| {
        matrix.set(i, j, 1);
        matrix.set(j, i, 1);
    };
    for i in 0..n - 1 {
        unit(i, i + 1);
    }
    unit(0, n - 1);
    let mut j = 0;
    while j + 2 < n {
        unit(j, j + 2);
        j += 2;
    }
    Instance::new_explicit(format!("onetwo{n}"), matrix, 1, None)
}

/// Certificate of the (n+1)/2 unit edges a greedy run can collect on the
/// 1-2 instance: {1,2} and {0,n-1}, then the chain {2,4}, {4,6}, ...
pub fn one_two_certificate(n: usize) -> Result<Certificate> {
    check_one_two_n(n)?;
    let mut edges = vec![(1, 2), (0, n - 1)];
    let mut j = 2;
    while j + 2 < n {
        edges.push((j, j + 2));
        j += 2;
    }
    Ok(Certificate {
        family: Family::OneTwo(n),
        edges,
        expected_length_scaled: (n as u64).div_ceil(2),
    })
}

// ---------------------------------------------------------------------------
// TSPLIB-subset interchange format
// ---------------------------------------------------------------------------

/// Serialize an instance. Coordinate instances write a NODE_COORD_SECTION
/// (`MAN_2D` for L1, `EUC_2D` otherwise, with the exponent recorded in a
/// `COMMENT : LP=<p>` line that takes precedence on read). Graphic and
/// explicit instances write a FULL_MATRIX of scaled integers with the scale
/// recorded in a `COMMENT : SCALE=<s>` line.
pub fn write_tsplib(instance: &Instance) -> Result<String> {
    use crate::metrics::MetricKind;
    let mut out = String::new();
    out.push_str(&format!("NAME : {}\n", instance.name()));
    out.push_str("TYPE : TSP\n");
    out.push_str(&format!("COMMENT : SCALE={}\n", instance.scale()));
    match &instance.metric().kind {
        MetricKind::Lp { p } => {
            out.push_str(&format!("COMMENT : LP={p}\n"));
            out.push_str(&format!("DIMENSION : {}\n", instance.n()));
            let weight_type = if *p == 1 { "MAN_2D" } else { "EUC_2D" };
            out.push_str(&format!("EDGE_WEIGHT_TYPE : {weight_type}\n"));
            out.push_str("NODE_COORD_SECTION\n");
            let coords = instance
                .coords()
                .expect("coordinate instances carry coords");
            for (i, c) in coords.iter().enumerate() {
                out.push_str(&format!("{} {} {}\n", i + 1, c.x, c.y));
            }
        }
        MetricKind::Graphic { .. } | MetricKind::Explicit { .. } => {
            out.push_str(&format!("DIMENSION : {}\n", instance.n()));
            out.push_str("EDGE_WEIGHT_TYPE : EXPLICIT\n");
            out.push_str("EDGE_WEIGHT_FORMAT : FULL_MATRIX\n");
            out.push_str("EDGE_WEIGHT_SECTION\n");
            let matrix = instance.to_exact_matrix()?;
            for i in 0..instance.n() {
                let row: Vec<String> = (0..instance.n())
                    .map(|j| matrix.get(i, j).to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
    }
    out.push_str("EOF\n");
    Ok(out)
}

struct HeaderState {
    name: Option<String>,
    type_ok: bool,
    dimension: Option<usize>,
    weight_type: Option<String>,
    weight_format: Option<String>,
    scale: Option<u64>,
    lp: Option<u32>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse the TSPLIB subset written by [`write_tsplib`]. Unknown keywords and
/// sections are rejected rather than skipped.
pub fn read_tsplib(text: &str) -> Result<Instance> {
    let mut header = HeaderState {
        name: None,
        type_ok: false,
        dimension: None,
        weight_type: None,
        weight_format: None,
        scale: None,
        lp: None,
    };
    let mut coords: Option<Vec<(usize, u32, u32)>> = None;
    let mut matrix_values: Option<Vec<u64>> = None;
    let mut saw_eof = false;

    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if saw_eof {
            return Err(parse_err(lineno, "content after EOF"));
        }
        if let Some(colon) = line.find(':') {
            let key = line[..colon].trim();
            let value = line[colon + 1..].trim();
            match key {
                "NAME" => header.name = Some(value.to_string()),
                "TYPE" => {
                    if value != "TSP" {
                        return Err(parse_err(lineno, format!("unsupported TYPE `{value}`")));
                    }
                    header.type_ok = true;
                }
                "COMMENT" => {
                    if let Some((ck, cv)) = value.split_once('=') {
                        match ck.trim() {
                            "SCALE" => {
                                header.scale = Some(cv.trim().parse().map_err(|_| {
                                    parse_err(lineno, format!("bad SCALE value `{cv}`"))
                                })?)
                            }
                            "LP" => {
                                header.lp = Some(cv.trim().parse().map_err(|_| {
                                    parse_err(lineno, format!("bad LP value `{cv}`"))
                                })?)
                            }
                            _ => {}
                        }
                    }
                }
                "DIMENSION" => {
                    header.dimension = Some(value.parse().map_err(|_| {
                        parse_err(lineno, format!("bad DIMENSION value `{value}`"))
                    })?)
                }
                "EDGE_WEIGHT_TYPE" => header.weight_type = Some(value.to_string()),
                "EDGE_WEIGHT_FORMAT" => header.weight_format = Some(value.to_string()),
                other => {
                    return Err(parse_err(lineno, format!("unknown keyword `{other}`")));
                }
            }
            continue;
        }
        match line {
            "NODE_COORD_SECTION" => {
                let n = header
                    .dimension
                    .ok_or_else(|| parse_err(lineno, "NODE_COORD_SECTION before DIMENSION"))?;
                let mut entries = Vec::with_capacity(n);
                for _ in 0..n {
                    let Some((cidx, craw)) = lines.next() else {
                        return Err(parse_err(
                            lineno,
                            format!("NODE_COORD_SECTION truncated: expected {n} entries"),
                        ));
                    };
                    let parts: Vec<&str> = craw.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(parse_err(
                            cidx + 1,
                            format!("expected `id x y`, got `{}`", craw.trim()),
                        ));
                    }
                    let id: usize = parts[0]
                        .parse()
                        .map_err(|_| parse_err(cidx + 1, "bad city id"))?;
                    let x: u32 = parts[1]
                        .parse()
                        .map_err(|_| parse_err(cidx + 1, "bad x coordinate"))?;
                    let y: u32 = parts[2]
                        .parse()
                        .map_err(|_| parse_err(cidx + 1, "bad y coordinate"))?;
                    entries.push((id, x, y));
                }
                coords = Some(entries);
            }
            "EDGE_WEIGHT_SECTION" => {
                let n = header
                    .dimension
                    .ok_or_else(|| parse_err(lineno, "EDGE_WEIGHT_SECTION before DIMENSION"))?;
                let need = n * n;
                let mut values = Vec::with_capacity(need);
                while values.len() < need {
                    let Some((vidx, vraw)) = lines.next() else {
                        return Err(parse_err(
                            lineno,
                            format!(
                                "EDGE_WEIGHT_SECTION truncated: expected {need} values, got {}",
                                values.len()
                            ),
                        ));
                    };
                    for tok in vraw.split_whitespace() {
                        let v: u64 = tok.parse().map_err(|_| {
                            parse_err(vidx + 1, format!("bad matrix entry `{tok}`"))
                        })?;
                        values.push(v);
                    }
                }
                if values.len() != need {
                    return Err(parse_err(
                        lineno,
                        format!("EDGE_WEIGHT_SECTION has {} values, expected {need}", values.len()),
                    ));
                }
                matrix_values = Some(values);
            }
            "EOF" => saw_eof = true,
            other => {
                return Err(parse_err(lineno, format!("unknown section `{other}`")));
            }
        }
    }

    if !header.type_ok {
        return Err(parse_err(0, "missing TYPE"));
    }
    let name = header.name.ok_or_else(|| parse_err(0, "missing NAME"))?;
    let n = header
        .dimension
        .ok_or_else(|| parse_err(0, "missing DIMENSION"))?;
    let weight_type = header
        .weight_type
        .ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_TYPE"))?;
    let scale = header.scale.unwrap_or(1);

    match weight_type.as_str() {
        "EXPLICIT" => {
            match header.weight_format.as_deref() {
                Some("FULL_MATRIX") => {}
                Some(other) => {
                    return Err(parse_err(
                        0,
                        format!("unsupported EDGE_WEIGHT_FORMAT `{other}`"),
                    ))
                }
                None => return Err(parse_err(0, "missing EDGE_WEIGHT_FORMAT")),
            }
            let values =
                matrix_values.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_SECTION"))?;
            let matrix = SquareMatrix::from_rows(
                values.chunks(n).map(|row| row.to_vec()).collect(),
            )?;
            Instance::new_explicit(name, matrix, scale, None)
        }
        "EUC_2D" | "MAN_2D" => {
            if scale != 1 {
                return Err(parse_err(
                    0,
                    "coordinate instances require SCALE=1".to_string(),
                ));
            }
            let entries = coords.ok_or_else(|| parse_err(0, "missing NODE_COORD_SECTION"))?;
            let p = header
                .lp
                .unwrap_or(if weight_type == "MAN_2D" { 1 } else { 2 });
            let mut pts = vec![None; n];
            for (id, x, y) in entries {
                if id == 0 || id > n {
                    return Err(parse_err(0, format!("city id {id} outside 1..={n}")));
                }
                if pts[id - 1].is_some() {
                    return Err(parse_err(0, format!("duplicate city id {id}")));
                }
                pts[id - 1] = Some(GridPoint::new(x, y)?);
            }
            let pts: Vec<GridPoint> = pts
                .into_iter()
                .enumerate()
                .map(|(i, p)| p.ok_or_else(|| parse_err(0, format!("missing city id {}", i + 1))))
                .collect::<Result<_>>()?;
            Instance::new_lp(name, p, pts)
        }
        other => Err(parse_err(
            0,
            format!("unsupported edge-weight type `{other}`"),
        )),
    }
}

// ---------------------------------------------------------------------------
// Certificate files
// ---------------------------------------------------------------------------

fn family_tag(family: Family) -> (&'static str, u64) {
    match family {
        Family::Gk(k) => ("gk", u64::from(k)),
        Family::CwGk(k) => ("cwgk", u64::from(k)),
        Family::OneTwo(n) => ("onetwo", n as u64),
    }
}

/// Serialize a certificate: a `FAMILY <tag> <param> <expected_length_scaled>`
/// header line followed by one `u v` id pair per line.
pub fn write_certificate(cert: &Certificate) -> String {
    let (tag, param) = family_tag(cert.family);
    let mut out = format!("FAMILY {tag} {param} {}\n", cert.expected_length_scaled);
    for &(u, v) in &cert.edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parse the certificate format written by [`write_certificate`].
pub fn read_certificate(text: &str) -> Result<Certificate> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, head)) = lines.next() else {
        return Err(parse_err(1, "empty certificate file"));
    };
    let parts: Vec<&str> = head.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "FAMILY" {
        return Err(parse_err(
            1,
            "expected header `FAMILY <tag> <param> <expected_length_scaled>`",
        ));
    }
    let param: u64 = parts[2]
        .parse()
        .map_err(|_| parse_err(1, format!("bad family parameter `{}`", parts[2])))?;
    let expected: u64 = parts[3]
        .parse()
        .map_err(|_| parse_err(1, format!("bad expected length `{}`", parts[3])))?;
    let family = match parts[1] {
        "gk" => Family::Gk(param as u32),
        "cwgk" => Family::CwGk(param as u32),
        "onetwo" => {
            check_one_two_n(param as usize)?;
            Family::OneTwo(param as usize)
        }
        other => return Err(parse_err(1, format!("unknown family tag `{other}`"))),
    };

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(idx + 1, format!("expected `u v`, got `{line}`")));
        }
        let u: usize = parts[0]
            .parse()
            .map_err(|_| parse_err(idx + 1, "bad city id"))?;
        let v: usize = parts[1]
            .parse()
            .map_err(|_| parse_err(idx + 1, "bad city id"))?;
        if u == v {
            return Err(parse_err(idx + 1, format!("self-loop at city {u}")));
        }
        let e = normalize_edge(u, v);
        if !seen.insert(e) {
            return Err(Error::DuplicateEdge { u: e.0, v: e.1 });
        }
        edges.push(e);
    }
    Ok(Certificate {
        family,
        edges,
        expected_length_scaled: expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{validate_metric, Length};

    #[test]
    fn gen_gk0_graphic_has_figure_layout() {
        let (inst, meta) = gen_gk(0, GkKind::Graphic).unwrap();
        assert_eq!(inst.n(), 8);
        assert_eq!(meta.width, 4);
        assert_eq!(meta.s_id, gk_city_id(1, 1));
        assert_eq!(meta.r_id, gk_city_id(3, 0));
    }

    #[test]
    fn gen_gk1_l1_dimensions() {
        let (inst, meta) = gen_gk(1, GkKind::L1).unwrap();
        assert_eq!(inst.n(), 26);
        assert_eq!(meta.width, 13);
        assert_eq!(meta.s_id, gk_city_id(4, 1));
        assert_eq!(meta.r_id, gk_city_id(12, 0));
    }

    #[test]
    fn gen_gk2_l2_city_count() {
        let (inst, _) = gen_gk(2, GkKind::L2).unwrap();
        assert_eq!(inst.n(), 80);
    }

    #[test]
    fn level_above_cap_is_rejected() {
        assert!(matches!(
            gen_gk(MAX_LEVEL + 1, GkKind::L1),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn certificate_base_is_seven_unit_edges() {
        let cert = gk_certificate(0).unwrap();
        assert_eq!(cert.edges.len(), 7);
        assert_eq!(cert.expected_length_scaled, 7);
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        for &(u, v) in &cert.edges {
            assert_eq!(inst.dist_value(u, v).unwrap(), Length::Exact(1));
        }
    }

    #[test]
    fn certificate_level1_counts_and_histogram() {
        let cert = gk_certificate(1).unwrap();
        assert_eq!(cert.edges.len(), 25);
        assert_eq!(cert.expected_length_scaled, 29);
        let (inst, _) = gen_gk(1, GkKind::L1).unwrap();
        let mut ones = 0;
        let mut threes = 0;
        let mut total = 0;
        for &(u, v) in &cert.edges {
            let d = inst.dist_value(u, v).unwrap().exact().unwrap();
            total += d;
            match d {
                1 => ones += 1,
                3 => threes += 1,
                other => panic!("unexpected edge length {other}"),
            }
        }
        assert_eq!((ones, threes, total), (23, 2, 29));
    }

    #[test]
    fn certificate_lengths_are_nondecreasing() {
        for k in 0..=3 {
            let cert = gk_certificate(k).unwrap();
            let (inst, _) = gen_gk(k, GkKind::L1).unwrap();
            let mut last = 0;
            for &(u, v) in &cert.edges {
                let d = inst.dist_value(u, v).unwrap().exact().unwrap();
                assert!(d >= last, "length drops at edge ({u},{v}) of level {k}");
                last = d;
            }
        }
    }

    #[test]
    fn certificate_totals_match_formula() {
        // (2k+8)*3^k - 1
        assert_eq!(gk_certificate_length(0), 7);
        assert_eq!(gk_certificate_length(1), 29);
        assert_eq!(gk_certificate_length(2), 107);
        assert_eq!(gk_certificate_length(3), 377);
        assert_eq!(gk_certificate_length(4), 1295);
        for k in 0..=2 {
            let cert = gk_certificate(k).unwrap();
            let (inst, _) = gen_gk(k, GkKind::L2).unwrap();
            let total: u64 = cert
                .edges
                .iter()
                .map(|&(u, v)| inst.dist_value(u, v).unwrap().exact().unwrap())
                .sum();
            assert_eq!(total, gk_certificate_length(k));
        }
    }

    #[test]
    fn cw_instance_level0() {
        let (inst, _, hub) = gen_cw_instance(0).unwrap();
        assert_eq!(inst.n(), 9);
        assert_eq!(hub.hub_id, 8);
        assert_eq!(hub.hub_len_scaled, 9);
        for u in 0..8 {
            assert_eq!(inst.dist_value(u, 8).unwrap(), Length::Exact(9));
        }
        let m = inst.to_exact_matrix().unwrap();
        assert!(validate_metric(&m).unwrap().passed());
    }

    #[test]
    fn cw_instance_level1_dimensions() {
        let (inst, _, hub) = gen_cw_instance(1).unwrap();
        assert_eq!(inst.n(), 27);
        assert_eq!(hub.hub_len_scaled, 27);
    }

    #[test]
    fn cw_hub_length_exceeds_every_grid_distance() {
        for k in 0..=2 {
            let (inst, _, hub) = gen_cw_instance(k).unwrap();
            let grid_n = inst.n() - 1;
            for u in 0..grid_n {
                for v in (u + 1)..grid_n {
                    let d = inst.dist_value(u, v).unwrap().exact().unwrap();
                    assert!(d < hub.hub_len_scaled);
                }
            }
        }
    }

    #[test]
    fn cw_certificate_is_scaled_gk_certificate() {
        let gk = gk_certificate(1).unwrap();
        let cw = cw_certificate(1).unwrap();
        assert_eq!(gk.edges, cw.edges);
        assert_eq!(cw.expected_length_scaled, 58);
        assert_eq!(cw.family, Family::CwGk(1));
    }

    #[test]
    fn one_two_unit_edges_n5() {
        let inst = gen_one_two(5).unwrap();
        let mut units = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                if inst.dist_value(u, v).unwrap() == Length::Exact(1) {
                    units.push((u, v));
                }
            }
        }
        // cycle edges plus the even pairs {0,2} and {2,4}
        assert_eq!(
            units,
            vec![(0, 1), (0, 2), (0, 4), (1, 2), (2, 3), (2, 4), (3, 4)]
        );
        let m = inst.to_exact_matrix().unwrap();
        assert!(validate_metric(&m).unwrap().passed());
    }

    #[test]
    fn one_two_unit_edge_count_n7() {
        let inst = gen_one_two(7).unwrap();
        let mut count = 0;
        for u in 0..7 {
            for v in (u + 1)..7 {
                if inst.dist_value(u, v).unwrap() == Length::Exact(1) {
                    count += 1;
                }
            }
        }
        // 7 cycle edges + 3 chord pairs
        assert_eq!(count, 10);
    }

    #[test]
    fn one_two_rejects_even_or_small_n() {
        assert!(gen_one_two(6).is_err());
        assert!(gen_one_two(3).is_err());
    }

    #[test]
    fn one_two_certificate_patterns() {
        let c5 = one_two_certificate(5).unwrap();
        assert_eq!(c5.edges, vec![(1, 2), (0, 4), (2, 4)]);
        assert_eq!(c5.expected_length_scaled, 3);

        let c7 = one_two_certificate(7).unwrap();
        assert_eq!(c7.edges.len(), 4);

        let c9 = one_two_certificate(9).unwrap();
        assert_eq!(c9.edges, vec![(1, 2), (0, 8), (2, 4), (4, 6), (6, 8)]);
    }

    #[test]
    fn tsplib_roundtrip_preserves_keys() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let text = write_tsplib(&inst).unwrap();
        let back = read_tsplib(&text).unwrap();
        assert_eq!(back.n(), inst.n());
        for u in 0..inst.n() {
            for v in 0..inst.n() {
                assert_eq!(back.dist_key(u, v).unwrap(), inst.dist_key(u, v).unwrap());
            }
        }
    }

    #[test]
    fn tsplib_roundtrip_preserves_scale() {
        let (inst, _, _) = gen_cw_instance(0).unwrap();
        let text = write_tsplib(&inst).unwrap();
        let back = read_tsplib(&text).unwrap();
        assert_eq!(back.scale(), 2);
        for u in 0..inst.n() {
            for v in 0..inst.n() {
                assert_eq!(back.dist_key(u, v).unwrap(), inst.dist_key(u, v).unwrap());
            }
        }
    }

    #[test]
    fn tsplib_truncated_names_missing_section() {
        let (inst, _) = gen_gk(0, GkKind::L1).unwrap();
        let text = write_tsplib(&inst).unwrap();
        let truncated: String = text
            .lines()
            .take_while(|l| !l.starts_with("NODE_COORD_SECTION"))
            .map(|l| format!("{l}\n"))
            .collect();
        match read_tsplib(&truncated) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("NODE_COORD_SECTION")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tsplib_unknown_keyword_rejected() {
        let text = "NAME : x\nTYPE : TSP\nWIBBLE : 3\n";
        assert!(matches!(read_tsplib(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn tsplib_asymmetric_matrix_rejected() {
        let text = "NAME : x\nTYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EXPLICIT\n\
                    EDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1\n2 0\nEOF\n";
        assert!(read_tsplib(text).is_err());
    }

    #[test]
    fn certificate_file_roundtrip() {
        let cert = gk_certificate(1).unwrap();
        let text = write_certificate(&cert);
        let back = read_certificate(&text).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn certificate_file_rejects_duplicates() {
        let text = "FAMILY gk 0 7\n0 2\n2 0\n";
        assert!(matches!(
            read_certificate(text),
            Err(Error::DuplicateEdge { .. })
        ));
    }
}
