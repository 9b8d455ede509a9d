//! Geometry of the size-`n` triangular lattice.
//!
//! A vertex `(r, s)` stands for the point `r + s·ξ` with `ξ = e^{iπ/3}`.
//! All arithmetic stays in these integer coordinates; the complex embedding
//! only shows up in the SVG renderer.
//!
//! Edges are directed by type: a type-`l` edge goes from its origin `x` to
//! `x − ξ^{2l}`, which in `(r, s)` steps is `(−1, 0)`, `(+1, −1)` and
//! `(0, +1)` for `l = 0, 1, 2`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `r + s·ξ` of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub r: i32,
    pub s: i32,
}

impl Vertex {
    pub const fn new(r: i32, s: i32) -> Self {
        Vertex { r, s }
    }

    pub fn step(self, dir: Dir) -> Self {
        self + dir.offset()
    }

    pub fn in_lattice(self, n: usize) -> bool {
        self.r >= 0 && self.s >= 0 && (self.r + self.s) as usize <= n
    }

    /// The three barycentric-style coordinates `(n − (r+s), r, s)`.
    pub fn coords(self, n: usize) -> Result<[usize; 3]> {
        if !self.in_lattice(n) {
            return Err(Error::OutOfLattice {
                r: self.r,
                s: self.s,
                n,
            });
        }
        let n = n as i32;
        Ok([
            (n - self.r - self.s) as usize,
            self.r as usize,
            self.s as usize,
        ])
    }

    /// Coordinate `x_l`, without a membership check.
    pub fn coord(self, n: usize, l: u8) -> i32 {
        match l {
            0 => n as i32 - self.r - self.s,
            1 => self.r,
            _ => self.s,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// A lattice displacement in `(r, s)` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Offset(pub i32, pub i32);

impl Add<Offset> for Vertex {
    type Output = Vertex;
    fn add(self, o: Offset) -> Vertex {
        Vertex::new(self.r + o.0, self.s + o.1)
    }
}

impl Sub for Vertex {
    type Output = Offset;
    fn sub(self, o: Vertex) -> Offset {
        Offset(self.r - o.r, self.s - o.s)
    }
}

/// One of the six unit directions `ξ^k`, `k = 0..6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir(u8);

impl Dir {
    pub const E: Dir = Dir(0);
    pub const NE: Dir = Dir(1);
    pub const NW: Dir = Dir(2);
    pub const W: Dir = Dir(3);
    pub const SW: Dir = Dir(4);
    pub const SE: Dir = Dir(5);

    pub const ALL: [Dir; 6] = [Dir(0), Dir(1), Dir(2), Dir(3), Dir(4), Dir(5)];

    /// `ξ^k` for any integer `k`.
    pub fn pow(k: i32) -> Dir {
        Dir(k.rem_euclid(6) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn offset(self) -> Offset {
        match self.0 {
            0 => Offset(1, 0),
            1 => Offset(0, 1),
            2 => Offset(-1, 1),
            3 => Offset(-1, 0),
            4 => Offset(0, -1),
            _ => Offset(1, -1),
        }
    }

    /// Multiply by `ξ^k` (rotate by `k·π/3`).
    pub fn rotate(self, k: i32) -> Dir {
        Dir::pow(self.0 as i32 + k)
    }

    pub fn opposite(self) -> Dir {
        self.rotate(3)
    }

    /// Type of the edge lying along this direction.
    pub fn edge_type(self) -> u8 {
        match self.0 % 3 {
            0 => 0,
            1 => 2,
            _ => 1,
        }
    }
}

/// Rotate an offset by `k·π/3`.
pub fn rotate_offset(o: Offset, k: i32) -> Offset {
    let mut o = o;
    for _ in 0..k.rem_euclid(6) {
        // (r + sξ)·ξ = rξ + sξ² = (−s, r + s)
        o = Offset(-o.1, o.0 + o.1);
    }
    o
}

/// A directed lattice edge, identified by its type and origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub edge_type: u8,
    pub origin: Vertex,
}

impl EdgeId {
    pub const fn new(edge_type: u8, r: i32, s: i32) -> Self {
        EdgeId {
            edge_type,
            origin: Vertex::new(r, s),
        }
    }

    pub fn displacement(edge_type: u8) -> Offset {
        match edge_type {
            0 => Offset(-1, 0),
            1 => Offset(1, -1),
            _ => Offset(0, 1),
        }
    }

    pub fn target(self) -> Vertex {
        self.origin + Self::displacement(self.edge_type)
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.origin, self.target())
    }

    pub fn height(self, n: usize) -> i32 {
        self.origin.coord(n, self.edge_type)
    }

    /// The edge joining two adjacent vertices, in whichever direction it is typed.
    pub fn between(p: Vertex, q: Vertex) -> Option<EdgeId> {
        let (t, origin) = match q - p {
            Offset(-1, 0) => (0, p),
            Offset(1, 0) => (0, q),
            Offset(1, -1) => (1, p),
            Offset(-1, 1) => (1, q),
            Offset(0, 1) => (2, p),
            Offset(0, -1) => (2, q),
            _ => return None,
        };
        Some(EdgeId {
            edge_type: t,
            origin,
        })
    }

    pub fn in_lattice(self, n: usize) -> bool {
        self.origin.in_lattice(n) && self.target().in_lattice(n)
    }
}

impl Ord for EdgeId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edge_type, self.origin.s, self.origin.r).cmp(&(
            other.edge_type,
            other.origin.s,
            other.origin.r,
        ))
    }
}

impl PartialOrd for EdgeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}@{}", self.edge_type, self.origin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Direct,
    Reversed,
}

/// A triangular face: direct faces are `{x, x+1, x+ξ}`, reversed faces
/// `{y, y+1, y+ξ̄}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceId {
    pub orientation: Orientation,
    pub anchor: Vertex,
}

impl FaceId {
    pub const fn direct(r: i32, s: i32) -> Self {
        FaceId {
            orientation: Orientation::Direct,
            anchor: Vertex::new(r, s),
        }
    }

    pub const fn reversed(r: i32, s: i32) -> Self {
        FaceId {
            orientation: Orientation::Reversed,
            anchor: Vertex::new(r, s),
        }
    }

    pub fn vertices(self) -> [Vertex; 3] {
        let x = self.anchor;
        match self.orientation {
            Orientation::Direct => [x, x.step(Dir::E), x.step(Dir::NE)],
            Orientation::Reversed => [x, x.step(Dir::E), x.step(Dir::SE)],
        }
    }

    /// The three edges in clockwise order.
    ///
    /// Direct: left (type 2 at `x`), right (type 1 at `x+ξ`), bottom (type 0 at `x+1`).
    /// Reversed: top (type 0 at `y+1`), right (type 2 at `y+ξ̄`), left (type 1 at `y`).
    pub fn edges(self) -> [EdgeId; 3] {
        let x = self.anchor;
        match self.orientation {
            Orientation::Direct => [
                EdgeId {
                    edge_type: 2,
                    origin: x,
                },
                EdgeId {
                    edge_type: 1,
                    origin: x.step(Dir::NE),
                },
                EdgeId {
                    edge_type: 0,
                    origin: x.step(Dir::E),
                },
            ],
            Orientation::Reversed => [
                EdgeId {
                    edge_type: 0,
                    origin: x.step(Dir::E),
                },
                EdgeId {
                    edge_type: 2,
                    origin: x.step(Dir::SE),
                },
                EdgeId {
                    edge_type: 1,
                    origin: x,
                },
            ],
        }
    }

    pub fn in_lattice(self, n: usize) -> bool {
        self.vertices().iter().all(|v| v.in_lattice(n))
    }

    /// The face with the given three vertices, if they form one.
    pub fn from_vertices(mut vs: [Vertex; 3]) -> Option<FaceId> {
        vs.sort_by_key(|v| (v.s, v.r));
        let [a, b, c] = vs;
        // Two vertices share the lower row for a direct face, the upper row for a reversed one.
        if a.s == b.s && b - a == Offset(1, 0) && c - a == Offset(0, 1) {
            return Some(FaceId {
                orientation: Orientation::Direct,
                anchor: a,
            });
        }
        if b.s == c.s && c - b == Offset(1, 0) && a - b == Offset(1, -1) {
            return Some(FaceId {
                orientation: Orientation::Reversed,
                anchor: b,
            });
        }
        None
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Direct => "direct",
            Orientation::Reversed => "reversed",
        };
        write!(f, "{o}@{}", self.anchor)
    }
}

/// Index tables for the edges and faces of `T_n`.
#[derive(Debug)]
pub struct Lattice {
    n: usize,
    edges: Vec<EdgeId>,
    edge_index: Vec<u32>,
    faces: Vec<FaceId>,
    face_edges: Vec<[u32; 3]>,
    edge_faces: Vec<Vec<u32>>,
    boundary: [Vec<u32>; 3],
}

const NONE: u32 = u32::MAX;

impl Lattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(n));
        }
        let ni = n as i32;
        let mut edges = Vec::with_capacity(3 * n * (n + 1) / 2);
        for t in 0..3u8 {
            for s in 0..=ni {
                for r in 0..=ni {
                    let e = EdgeId::new(t, r, s);
                    if e.in_lattice(n) {
                        edges.push(e);
                    }
                }
            }
        }
        let side = n + 2;
        let mut edge_index = vec![NONE; 3 * side * side];
        for (i, e) in edges.iter().enumerate() {
            edge_index[Self::slot(side, *e)] = i as u32;
        }

        // Sweep order: strip by strip from the bottom, west to east.
        let mut faces = Vec::with_capacity(n * n);
        for k in 0..ni {
            for r in 0..ni {
                let d = FaceId::direct(r, k);
                if d.in_lattice(n) {
                    faces.push(d);
                }
                let rv = FaceId::reversed(r, k + 1);
                if rv.in_lattice(n) {
                    faces.push(rv);
                }
            }
        }
        let mut lat = Lattice {
            n,
            edges,
            edge_index,
            faces: Vec::new(),
            face_edges: Vec::new(),
            edge_faces: Vec::new(),
            boundary: [Vec::new(), Vec::new(), Vec::new()],
        };
        let mut edge_faces = vec![Vec::with_capacity(2); lat.edges.len()];
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let mut idx = [0u32; 3];
            for (k, e) in f.edges().iter().enumerate() {
                let i = lat.index(*e).expect("face edge inside lattice");
                idx[k] = i as u32;
                edge_faces[i].push(fi as u32);
            }
            face_edges.push(idx);
        }
        let boundary = [0u8, 1, 2].map(|l| {
            boundary_edges(l, n)
                .expect("valid side")
                .into_iter()
                .map(|e| lat.index(e).expect("boundary edge") as u32)
                .collect()
        });
        lat.faces = faces;
        lat.face_edges = face_edges;
        lat.edge_faces = edge_faces;
        lat.boundary = boundary;
        Ok(lat)
    }

    /// Shared, lazily built lattice for size `n`.
    pub fn shared(n: usize) -> Result<Arc<Lattice>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Lattice>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("lattice cache poisoned");
        if let Some(l) = guard.get(&n) {
            return Ok(Arc::clone(l));
        }
        let l = Arc::new(Lattice::new(n)?);
        guard.insert(n, Arc::clone(&l));
        Ok(l)
    }

    fn slot(side: usize, e: EdgeId) -> usize {
        (e.edge_type as usize * side + e.origin.r as usize) * side + e.origin.s as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// All edges in canonical order `(type, s, r)`.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn index(&self, e: EdgeId) -> Option<usize> {
        let side = self.n + 2;
        if e.edge_type > 2
            || e.origin.r < 0
            || e.origin.s < 0
            || e.origin.r as usize > self.n
            || e.origin.s as usize > self.n
        {
            return None;
        }
        match self.edge_index[Self::slot(side, e)] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    /// Index of the edge joining `p` and `q`, if both are lattice vertices and adjacent.
    pub fn index_between(&self, p: Vertex, q: Vertex) -> Option<usize> {
        EdgeId::between(p, q).and_then(|e| self.index(e))
    }

    /// Faces in sweep order (bottom strip first, west to east).
    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn face_edge_indices(&self, face: usize) -> [usize; 3] {
        self.face_edges[face].map(|i| i as usize)
    }

    /// Faces (by sweep index) incident to an edge.
    pub fn incident_faces(&self, edge: usize) -> impl Iterator<Item = usize> + '_ {
        self.edge_faces[edge].iter().map(|&f| f as usize)
    }

    pub fn face_index(&self, f: FaceId) -> Option<usize> {
        if !f.in_lattice(self.n) {
            return None;
        }
        let e = self.index(f.edges()[0])?;
        self.incident_faces(e).find(|&i| self.faces[i] == f)
    }

    /// Edge indices of side `l` in increasing height.
    pub fn side(&self, l: u8) -> impl Iterator<Item = usize> + '_ {
        self.boundary[l as usize].iter().map(|&i| i as usize)
    }

    pub fn is_boundary(&self, edge: usize) -> bool {
        self.edge_faces[edge].len() == 1
    }
}

/// `(x_0, x_1, x_2)` for a vertex of `T_n`.
pub fn coords(v: Vertex, n: usize) -> Result<[usize; 3]> {
    v.coords(n)
}

/// Boundary side `l` of `T_n`, ordered by strictly increasing height `0..n`.
///
/// Side 0 runs east to west along the bottom, side 1 from the apex down to
/// `(n, 0)`, side 2 from `(0, 0)` up to the apex.
pub fn boundary_edges(side: u8, n: usize) -> Result<Vec<EdgeId>> {
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let n = n as i32;
    let edges = match side {
        0 => (0..n).map(|h| EdgeId::new(0, n - h, 0)).collect(),
        1 => (0..n).map(|h| EdgeId::new(1, h, n - h)).collect(),
        2 => (0..n).map(|h| EdgeId::new(2, 0, h)).collect(),
        _ => return Err(Error::InvalidSide(side)),
    };
    Ok(edges)
}

/// The three edges of a face with their clockwise position (1-based).
pub fn face_edges(f: FaceId) -> [(EdgeId, u8); 3] {
    let e = f.edges();
    [(e[0], 1), (e[1], 2), (e[2], 3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_examples() {
        assert_eq!(coords(Vertex::new(2, 1), 5).unwrap(), [2, 2, 1]);
        assert_eq!(coords(Vertex::new(0, 0), 5).unwrap(), [5, 0, 0]);
        assert_eq!(coords(Vertex::new(0, 5), 5).unwrap(), [0, 0, 5]);
        assert!(coords(Vertex::new(3, 3), 5).is_err());
        assert!(coords(Vertex::new(-1, 0), 5).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(
            boundary_edges(0, 2).unwrap(),
            vec![EdgeId::new(0, 2, 0), EdgeId::new(0, 1, 0)]
        );
        assert_eq!(
            boundary_edges(2, 2).unwrap(),
            vec![EdgeId::new(2, 0, 0), EdgeId::new(2, 0, 1)]
        );
        assert_eq!(boundary_edges(1, 1).unwrap(), vec![EdgeId::new(1, 0, 1)]);
        assert!(boundary_edges(3, 2).is_err());
    }

    #[test]
    fn boundary_heights_and_chaining() {
        for n in 1..=8 {
            for l in 0..3u8 {
                let es = boundary_edges(l, n).unwrap();
                assert_eq!(es.len(), n);
                for (h, e) in es.iter().enumerate() {
                    assert_eq!(e.edge_type, l);
                    assert_eq!(e.height(n), h as i32);
                    assert!(e.in_lattice(n));
                }
                for w in es.windows(2) {
                    let (a0, a1) = w[0].endpoints();
                    let (b0, b1) = w[1].endpoints();
                    // consecutive edges share exactly one endpoint
                    let shared = [a0, a1].iter().filter(|v| **v == b0 || **v == b1).count();
                    assert_eq!(shared, 1);
                }
            }
        }
    }

    #[test]
    fn face_edge_examples() {
        let f = FaceId::direct(0, 0);
        assert_eq!(
            face_edges(f),
            [
                (EdgeId::new(2, 0, 0), 1),
                (EdgeId::new(1, 0, 1), 2),
                (EdgeId::new(0, 1, 0), 3)
            ]
        );
        let g = FaceId::reversed(0, 1);
        assert!(g.in_lattice(2));
        assert_eq!(
            face_edges(g),
            [
                (EdgeId::new(0, 1, 1), 1),
                (EdgeId::new(2, 1, 0), 2),
                (EdgeId::new(1, 0, 1), 3)
            ]
        );
        // the edges close a triangle on the face's vertex set
        for f in [f, g] {
            let vs = f.vertices();
            for e in f.edges() {
                let (a, b) = e.endpoints();
                assert!(vs.contains(&a) && vs.contains(&b));
            }
        }
        let lat = Lattice::new(2).unwrap();
        // the edge shared by direct@(0,0) and reversed@(0,1) is the type-1 edge at (0,1)
        let e = lat.index(EdgeId::new(1, 0, 1)).unwrap();
        let mut inc: Vec<FaceId> = lat.incident_faces(e).map(|i| lat.faces()[i]).collect();
        inc.sort_by_key(|f| f.orientation);
        assert_eq!(inc, vec![FaceId::direct(0, 0), FaceId::reversed(0, 1)]);
        let bottom = lat.index(EdgeId::new(0, 1, 0)).unwrap();
        assert!(lat.is_boundary(bottom));
    }

    #[test]
    fn counts_and_incidence() {
        for n in 1..=8 {
            let lat = Lattice::new(n).unwrap();
            assert_eq!(lat.num_edges(), 3 * n * (n + 1) / 2);
            let direct = lat
                .faces()
                .iter()
                .filter(|f| f.orientation == Orientation::Direct)
                .count();
            let reversed = lat.faces().len() - direct;
            assert_eq!(direct, n * (n + 1) / 2);
            assert_eq!(reversed, n * (n - 1) / 2);
            let on_boundary: std::collections::HashSet<usize> =
                (0..3).flat_map(|l| lat.side(l)).collect();
            for i in 0..lat.num_edges() {
                let k = lat.incident_faces(i).count();
                if on_boundary.contains(&i) {
                    assert_eq!(k, 1);
                } else {
                    assert_eq!(k, 2);
                }
            }
            for f in lat.faces() {
                let mut types: Vec<u8> = f.edges().iter().map(|e| e.edge_type).collect();
                types.sort();
                assert_eq!(types, vec![0, 1, 2]);
                assert_eq!(FaceId::from_vertices(f.vertices()), Some(*f));
            }
            let mut sorted = lat.edges().to_vec();
            sorted.sort();
            assert_eq!(sorted, lat.edges());
        }
    }

    #[test]
    fn directions() {
        for d in Dir::ALL {
            assert_eq!(rotate_offset(d.offset(), 1), d.rotate(1).offset());
            assert_eq!(d.opposite().opposite(), d);
            let e = EdgeId::between(Vertex::new(2, 2), Vertex::new(2, 2).step(d)).unwrap();
            assert_eq!(e.edge_type, d.edge_type());
        }
    }
}
