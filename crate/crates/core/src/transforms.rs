//! Local moves on color maps: openings, arrows and their reversal, the
//! replacement move, and the reduction of maps with `G(C,2) = 0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::colormap::{Color, ColorMap};
use crate::error::{Error, Result};
use crate::lattice::{Dir, EdgeId, FaceId, Lattice, Offset, Vertex};

/// Two same-colored line edges at `center` along `dir·ξ⁻¹` and `dir·ξ`.
///
/// `dir` points along the middle edge `e''` of the lozenge they bound, so the
/// opening type is the edge type of `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Opening {
    pub center: Vertex,
    pub dir: Dir,
    pub open_type: u8,
    pub color: Color,
    pub edges: (EdgeId, EdgeId),
}

impl Opening {
    /// The opening at `center` in direction `dir`, if `C` has one there.
    pub fn at(c: &ColorMap, center: Vertex, dir: Dir) -> Option<Opening> {
        let n = c.n();
        let (p, q) = (center.step(dir.rotate(-1)), center.step(dir.rotate(1)));
        if !center.in_lattice(n) || !p.in_lattice(n) || !q.in_lattice(n) {
            return None;
        }
        let e = EdgeId::between(center, p)?;
        let f = EdgeId::between(center, q)?;
        let (ce, cf) = (c.get(e)?, c.get(f)?);
        (ce == cf && ce.is_line()).then_some(Opening {
            center,
            dir,
            open_type: dir.edge_type(),
            color: ce,
            edges: (e, f),
        })
    }

    /// The middle edge `e''` from the center along `dir`.
    pub fn middle(&self) -> EdgeId {
        EdgeId::between(self.center, self.center.step(self.dir)).expect("adjacent vertices")
    }
}

impl fmt::Display for Opening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "opening at {} type {} dir {} color {}",
            self.center,
            self.open_type,
            self.dir.exponent(),
            self.color
        )
    }
}

pub(crate) fn vertices(n: usize) -> impl Iterator<Item = Vertex> {
    let n = n as i32;
    (0..=n).flat_map(move |s| (0..=n - s).map(move |r| Vertex::new(r, s)))
}

/// All openings of `C`, ordered by center (bottom row first), then type, then direction.
pub fn find_openings(c: &ColorMap) -> Vec<Opening> {
    let mut out = Vec::new();
    for v in vertices(c.n()) {
        let mut here: Vec<Opening> = Dir::ALL
            .iter()
            .filter_map(|&d| Opening::at(c, v, d))
            .collect();
        here.sort_by_key(|o| (o.open_type, o.dir.exponent()));
        out.extend(here);
    }
    out
}

/// The maximal arrow at an opening.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub opening: Opening,
    pub length: usize,
    /// Faces covered by the arrow.
    pub faces: Vec<FaceId>,
    /// Edges of those faces, in canonical order.
    pub region: Vec<EdgeId>,
}

impl Arrow {
    /// The far end of the arrow, `x + (r+1)·dir`.
    pub fn far_end(&self) -> Vertex {
        let o = self.opening.dir.offset();
        let k = self.length as i32 + 1;
        self.opening.center + Offset(o.0 * k, o.1 * k)
    }

    /// Image of a vertex under the half-turn exchanging the two ends.
    pub fn rotate(&self, p: Vertex) -> Vertex {
        let (x, y) = (self.opening.center, self.far_end());
        Vertex::new(x.r + y.r - p.r, x.s + y.s - p.s)
    }
}

fn face_of(n: usize, a: Vertex, b: Vertex, c: Vertex) -> Result<FaceId> {
    FaceId::from_vertices([a, b, c])
        .filter(|f| f.in_lattice(n))
        .ok_or_else(|| Error::Precondition(format!("arrow leaves the lattice near {a}")))
}

/// Follow the chain of openings from `o` until the middle edge carries the
/// opening color.
pub fn arrow_at(c: &ColorMap, o: &Opening) -> Result<Arrow> {
    let n = c.n();
    if Opening::at(c, o.center, o.dir).as_ref() != Some(o) {
        return Err(Error::Precondition(format!("no {o}")));
    }
    let (d, left, right) = (o.dir, o.dir.rotate(-1), o.dir.rotate(1));
    let mut faces = Vec::new();
    let mut y = o.center;
    for k in 0..=n + 1 {
        let z = y.step(d);
        faces.push(face_of(n, y, z, y.step(left))?);
        faces.push(face_of(n, y, z, y.step(right))?);
        let mid = EdgeId::between(y, z).expect("adjacent");
        let cm = c
            .get(mid)
            .ok_or_else(|| Error::Precondition(format!("arrow leaves the lattice at {y}")))?;
        if !cm.is_line() {
            return Err(Error::Internal(format!(
                "middle edge {mid} of {o} colored {cm}"
            )));
        }
        if cm == o.color {
            let region: BTreeSet<EdgeId> = faces.iter().flat_map(|f| f.edges()).collect();
            return Ok(Arrow {
                opening: *o,
                length: k,
                faces,
                region: region.into_iter().collect(),
            });
        }
        faces.push(face_of(n, z, y.step(left), z.step(left))?);
        faces.push(face_of(n, z, y.step(right), z.step(right))?);
        y = z;
    }
    Err(Error::Internal(format!("arrow at {o} does not terminate")))
}

/// Rotate the arrow region by a half-turn. Length 0 is the identity.
pub fn reverse_arrow(c: &ColorMap, a: &Arrow) -> Result<ColorMap> {
    let lattice = c.lattice();
    let mut out = c.clone();
    for &e in &a.region {
        let (p, q) = e.endpoints();
        let img = EdgeId::between(a.rotate(p), a.rotate(q))
            .filter(|img| a.region.binary_search(img).is_ok())
            .ok_or_else(|| Error::Internal(format!("arrow region not symmetric at {e}")))?;
        let i = lattice.index(e).expect("region edge in lattice");
        out.colors_mut()[i] = c.get(img).expect("region edge in lattice");
    }
    Ok(out)
}

/// Reverse the arrow at the opening at `center` along `dir` with color `color`.
/// Returns `None` when there is no such opening.
pub fn reverse_arrow_at(
    c: &ColorMap,
    center: Vertex,
    dir: Dir,
    color: Color,
) -> Result<Option<(ColorMap, usize)>> {
    match Opening::at(c, center, dir) {
        Some(o) if o.color == color => {
            let a = arrow_at(c, &o)?;
            Ok(Some((reverse_arrow(c, &a)?, a.length)))
        }
        _ => Ok(None),
    }
}

fn index_between(lattice: &Lattice, p: Vertex, q: Vertex) -> Result<usize> {
    lattice
        .index_between(p, q)
        .ok_or_else(|| Error::Precondition(format!("no edge between {p} and {q}")))
}

/// Exchange a 3 for an m at a bottom vertex `v`.
///
/// Requires `C({v+ξ², v}) = 3` and `C((v+1, v)) = 0`. Afterwards
/// `C((v, v−1)) = 0`, `C((v+1, v)) = 1`, `C({v, v+ξ}) = m` and `C({v+ξ², v}) = 0`.
pub fn replacement(c: &ColorMap, v: Vertex) -> Result<ColorMap> {
    let lattice = c.lattice().clone();
    let nw = index_between(&lattice, v.step(Dir::NW), v)?;
    let east = index_between(&lattice, v.step(Dir::E), v)?;
    let west = index_between(&lattice, v, v.step(Dir::W))?;
    let up = index_between(&lattice, v, v.step(Dir::NE))?;
    if c.at(nw) != Color::Three || c.at(east) != Color::Zero {
        return Err(Error::Precondition(format!(
            "replacement at {v} needs colors (3, 0), found ({}, {})",
            c.at(nw),
            c.at(east)
        )));
    }
    let mut out = c.clone();
    let cols = out.colors_mut();
    cols[west] = Color::Zero;
    cols[east] = Color::One;
    cols[up] = Color::M;
    cols[nw] = Color::Zero;
    if !out.validate() {
        return Err(Error::Internal(format!(
            "replacement at {v} produced an invalid map"
        )));
    }
    Ok(out)
}

/// Zero blocks along the bottom side, read west to east.
///
/// Block `i` covers bottom vertices `x[i]..=y[i]`; `b_i = x_i − y_{i−1}`
/// with `y_0 = 0`. When the bottom has no zeros a single empty block at the
/// west corner is reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BottomStructure {
    pub n: usize,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl BottomStructure {
    pub fn p(&self) -> usize {
        self.x.len()
    }

    /// `r_i`, 1-based.
    pub fn r(&self, i: usize) -> usize {
        self.y[i - 1] - self.x[i - 1]
    }

    /// `b_i`, 1-based.
    pub fn b(&self, i: usize) -> usize {
        self.x[i - 1] - if i == 1 { 0 } else { self.y[i - 2] }
    }

    /// `y_i` with `y_0 = 0`.
    pub fn y_at(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.y[i - 1]
        }
    }

    pub fn n0(&self) -> usize {
        (1..=self.p()).map(|i| self.r(i)).sum()
    }

    /// Height of the trapeze above block `i`: `n₀ − Σ_{j<i} r_j`.
    pub fn s(&self, i: usize) -> usize {
        self.n0() - (1..i).map(|j| self.r(j)).sum::<usize>()
    }

    /// The bottom colors west to east, rebuilt from the blocks.
    pub fn west_to_east(&self) -> Vec<u8> {
        let mut out = vec![1u8; self.n];
        for (&a, &b) in self.x.iter().zip(&self.y) {
            for bit in &mut out[a..b] {
                *bit = 0;
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.p() == 1 && self.b(1) == 0
    }
}

/// Bottom edge `u` (1-based, west to east) joins `(u−1, 0)` and `(u, 0)`.
fn bottom_west_to_east(c: &ColorMap) -> Vec<Color> {
    let mut v = c.side_colors(0);
    v.reverse();
    v
}

/// Blocks of the bottom side. Requires `G(C,2) = 0`.
pub fn bottom_structure(c: &ColorMap) -> Result<BottomStructure> {
    let g2 = c.gash_number(2);
    if g2 != 0 {
        return Err(Error::Precondition(format!("G(C,2) = {g2}, expected 0")));
    }
    Ok(blocks(c))
}

fn blocks(c: &ColorMap) -> BottomStructure {
    let bottom = bottom_west_to_east(c);
    let n = bottom.len();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    let mut u = 0;
    while u < n {
        if bottom[u] == Color::Zero {
            let start = u;
            while u < n && bottom[u] == Color::Zero {
                u += 1;
            }
            x.push(start);
            y.push(u);
        } else {
            u += 1;
        }
    }
    if x.is_empty() {
        x.push(0);
        y.push(0);
    }
    BottomStructure { n, x, y }
}

/// Vertices `origin + u + vξ` with `0 ≤ u ≤ r`, `v ≥ 0`, `u + v ≤ s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Trapeze {
    pub r: usize,
    pub s: usize,
    pub origin: Vertex,
}

/// Vertices `origin + u + vξ` with `0 ≤ u ≤ r`, `0 ≤ v ≤ s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LozengeRegion {
    pub r: usize,
    pub s: usize,
    pub origin: Vertex,
}

impl Trapeze {
    pub fn contains(&self, p: Vertex) -> bool {
        let (u, v) = (p.r - self.origin.r, p.s - self.origin.s);
        u >= 0 && v >= 0 && u <= self.r as i32 && u + v <= self.s as i32
    }

    /// Lattice edges with both ends in the region.
    pub fn edges(&self, lattice: &Lattice) -> Vec<usize> {
        region_edges(lattice, |p| self.contains(p))
    }
}

impl LozengeRegion {
    pub fn contains(&self, p: Vertex) -> bool {
        let (u, v) = (p.r - self.origin.r, p.s - self.origin.s);
        u >= 0 && v >= 0 && u <= self.r as i32 && v <= self.s as i32
    }

    pub fn edges(&self, lattice: &Lattice) -> Vec<usize> {
        region_edges(lattice, |p| self.contains(p))
    }
}

fn region_edges(lattice: &Lattice, inside: impl Fn(Vertex) -> bool) -> Vec<usize> {
    lattice
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            let (p, q) = e.endpoints();
            inside(p) && inside(q)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Whether the lozenge region carries its forced filling: type 0 edges
/// colored 1, type 1 colored 3, type 2 colored 0.
pub fn check_lozenge_region(c: &ColorMap, region: &LozengeRegion) -> bool {
    const FILL: [Color; 3] = [Color::One, Color::Three, Color::Zero];
    let lattice = c.lattice();
    region
        .edges(lattice)
        .into_iter()
        .all(|i| c.at(i) == FILL[lattice.edges()[i].edge_type as usize])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    ArrowReversal,
    Replacement,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::ArrowReversal => "arrow_reversal",
            MoveKind::Replacement => "replacement",
        })
    }
}

/// One applied move: what, where, and how many edges changed color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub op: MoveKind,
    pub site: Vertex,
    pub changed: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, ({},{}), {})",
            self.op, self.site.r, self.site.s, self.changed
        )
    }
}

fn diff_count(a: &ColorMap, b: &ColorMap) -> usize {
    a.colors()
        .iter()
        .zip(b.colors())
        .filter(|(x, y)| x != y)
        .count()
}

/// A map being transformed, with the moves applied so far.
struct Run {
    map: ColorMap,
    trace: Vec<TraceStep>,
    replacements: usize,
}

impl Run {
    fn new(map: ColorMap) -> Self {
        Run {
            map,
            trace: Vec::new(),
            replacements: 0,
        }
    }

    fn record(&mut self, op: MoveKind, site: Vertex, next: ColorMap) {
        let changed = diff_count(&self.map, &next);
        self.map = next;
        if changed > 0 {
            self.trace.push(TraceStep { op, site, changed });
        }
    }

    /// Reverse the east-pointing 0-arrow at `site`. Returns false if there is no opening.
    fn reverse_east(&mut self, site: Vertex) -> Result<bool> {
        match reverse_arrow_at(&self.map, site, Dir::E, Color::Zero)? {
            Some((next, _)) => {
                self.record(MoveKind::ArrowReversal, site, next);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn replace(&mut self, v: Vertex) -> Result<()> {
        let next = replacement(&self.map, v)?;
        self.record(MoveKind::Replacement, v, next);
        self.replacements += 1;
        Ok(())
    }

    fn normalize_trapeze(&mut self, t: &Trapeze) -> Result<()> {
        let lattice = self.map.lattice().clone();
        let zero = |c: &ColorMap, p: Vertex, q: Vertex| {
            lattice.index_between(p, q).map(|i| c.at(i)) == Some(Color::Zero)
        };
        let o = t.origin;
        for k in 0..t.r as i32 {
            if !zero(&self.map, o + Offset(k, 0), o + Offset(k + 1, 0)) {
                return Err(Error::Precondition(format!(
                    "trapeze at {o}: bottom edge {k} is not 0"
                )));
            }
        }
        for k in 0..t.s as i32 {
            if !zero(&self.map, o + Offset(0, k), o + Offset(0, k + 1)) {
                return Err(Error::Precondition(format!(
                    "trapeze at {o}: left edge {k} is not 0"
                )));
            }
        }
        for j in 0..t.r as i32 {
            let s = t.s as i32 - j;
            for v in 1..s {
                let site = o + Offset(j, v);
                if !self.reverse_east(site)? {
                    return Err(Error::Internal(format!("expected a 0 opening at {site}")));
                }
            }
        }
        if let Some(&bad) = t
            .edges(&lattice)
            .iter()
            .find(|&&i| self.map.at(i) != Color::Zero)
        {
            return Err(Error::Internal(format!(
                "trapeze at {o} still has {} colored {}",
                lattice.edges()[bad],
                self.map.at(bad)
            )));
        }
        Ok(())
    }

    /// Bring every trapeze above a zero block to all-0 and check the lozenge
    /// regions between them.
    fn normalize_bottom(&mut self) -> Result<BottomStructure> {
        let bs = blocks(&self.map);
        for i in 1..=bs.p() {
            let lozenge = LozengeRegion {
                r: bs.b(i),
                s: bs.s(i),
                origin: Vertex::new(bs.y_at(i - 1) as i32, 0),
            };
            if !check_lozenge_region(&self.map, &lozenge) {
                return Err(Error::Internal(format!(
                    "lozenge region {lozenge:?} is not filled"
                )));
            }
            let t = Trapeze {
                r: bs.r(i),
                s: bs.s(i),
                origin: Vertex::new(bs.x[i - 1] as i32, 0),
            };
            self.normalize_trapeze(&t)?;
        }
        Ok(bs)
    }

    /// Move the westmost zero of block `i` next to block `i−1` (or to the
    /// west corner when `i = 1`), then sweep the arrows above the new column.
    fn phi(&mut self, bs: &BottomStructure, i: usize) -> Result<()> {
        let west = bs.y_at(i - 1) as i32;
        let xi = bs.x[i - 1] as i32;
        for u in (west + 1..=xi).rev() {
            self.replace(Vertex::new(u, 0))?;
        }
        for q in 1..=bs.r(i) as i32 {
            self.reverse_east(Vertex::new(west, q))?;
        }
        Ok(())
    }
}

fn require_g2_zero(c: &ColorMap) -> Result<()> {
    match c.gash_number(2) {
        0 => Ok(()),
        g => Err(Error::Precondition(format!("G(C,2) = {g}, expected 0"))),
    }
}

/// Turn every edge of the trapeze to 0 by reversing the east 0-arrows
/// along each column, bottom to top. The bottom and left sides must be 0.
pub fn normalize_trapeze(c: &ColorMap, t: &Trapeze) -> Result<ColorMap> {
    let mut run = Run::new(c.clone());
    run.normalize_trapeze(t)?;
    Ok(run.map)
}

/// Merge the last bottom block into the previous one. Returns the new map and
/// the number of 3-edges exchanged for m-edges (`r_p·b_p`).
pub fn group_columns(c: &ColorMap) -> Result<(ColorMap, usize)> {
    require_g2_zero(c)?;
    let mut run = Run::new(c.clone());
    let bs = run.normalize_bottom()?;
    let p = bs.p();
    if p < 2 {
        return Err(Error::Precondition(format!(
            "group_columns needs p >= 2, got {p}"
        )));
    }
    let mut bs = bs;
    for _ in 0..bs.r(p) {
        run.phi(&bs, p)?;
        bs = run.normalize_bottom()?;
    }
    if bs.p() != p - 1 {
        return Err(Error::Internal(format!(
            "grouping left {} blocks, expected {}",
            bs.p(),
            p - 1
        )));
    }
    Ok((run.map, run.replacements))
}

/// Result of [`reduce`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub map: ColorMap,
    /// Number of 3-edges exchanged for m-edges.
    pub exchanged: usize,
    pub trace: Vec<TraceStep>,
}

/// Reduce a map with `G(C,2) = 0` to one whose bottom reads `0^{n₀}1^{n₁}`
/// west to east, with the trapeze above the zeros all 0.
pub fn reduce(c: &ColorMap) -> Result<Reduction> {
    require_g2_zero(c)?;
    if !c.validate() {
        return Err(Error::InvalidMap("reduce needs a valid map".into()));
    }
    let mut run = Run::new(c.clone());
    loop {
        let bs = run.normalize_bottom()?;
        if bs.p() >= 2 {
            run.phi(&bs, bs.p())?;
        } else if bs.b(1) >= 1 {
            run.phi(&bs, 1)?;
        } else {
            break;
        }
    }
    let expected = (c.n0() * c.n1()) as u64 - c.gash_number(0);
    if run.replacements as u64 != expected {
        return Err(Error::Internal(format!(
            "reduction exchanged {} edges, expected {expected}",
            run.replacements
        )));
    }
    if run.map.side_colors(1) != c.side_colors(1) || run.map.side_colors(2) != c.side_colors(2) {
        return Err(Error::Internal("reduction changed side 1 or side 2".into()));
    }
    Ok(Reduction {
        map: run.map,
        exchanged: run.replacements,
        trace: run.trace,
    })
}
