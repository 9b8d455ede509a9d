//! Color maps, boundary conditions, gash numbers and the closed-form counts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Lattice, Orientation};

/// Edge color. `0` and `1` are line colors, `3` and `m` lozenge colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "m")]
    M,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::Zero, Color::One, Color::Three, Color::M];

    pub fn as_char(self) -> char {
        match self {
            Color::Zero => '0',
            Color::One => '1',
            Color::Three => '3',
            Color::M => 'm',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            '0' => Some(Color::Zero),
            '1' => Some(Color::One),
            '3' => Some(Color::Three),
            'm' => Some(Color::M),
            _ => None,
        }
    }

    pub fn is_line(self) -> bool {
        matches!(self, Color::Zero | Color::One)
    }

    /// Swap 0 and 1; lozenge colors are left alone.
    pub fn flip_line(self) -> Color {
        match self {
            Color::Zero => Color::One,
            Color::One => Color::Zero,
            c => c,
        }
    }

    fn code(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

use Color::{One as C1, Three as C3, Zero as C0, M as CM};

/// The admissible clockwise triples (all cyclic rotations listed).
pub const FACE_TRIPLES: [[Color; 3]; 8] = [
    [C0, C0, C0],
    [C1, C1, C1],
    [C1, C0, C3],
    [C0, C3, C1],
    [C3, C1, C0],
    [C0, C1, CM],
    [C1, CM, C0],
    [CM, C0, C1],
];

const fn build_face_table() -> [bool; 64] {
    let mut t = [false; 64];
    let mut i = 0;
    while i < FACE_TRIPLES.len() {
        let [a, b, c] = FACE_TRIPLES[i];
        t[(a as usize) * 16 + (b as usize) * 4 + c as usize] = true;
        i += 1;
    }
    t
}

static FACE_TABLE: [bool; 64] = build_face_table();

/// Whether `(c1, c2, c3)`, read clockwise, is an admissible face.
#[inline]
pub fn face_ok(c1: Color, c2: Color, c3: Color) -> bool {
    FACE_TABLE[c1.code() * 16 + c2.code() * 4 + c3.code()]
}

/// The unique color for the remaining clockwise slot given two known slots,
/// or `None` when no admissible face fits. Slots are 0-based.
pub fn complete_face(pos_a: usize, c_a: Color, pos_b: usize, c_b: Color) -> Option<Color> {
    assert!(
        pos_a < 3 && pos_b < 3 && pos_a != pos_b,
        "positions must be distinct slots 0..3"
    );
    let third = 3 - pos_a - pos_b;
    let mut found = None;
    for c in Color::ALL {
        let mut t = [C0; 3];
        t[pos_a] = c_a;
        t[pos_b] = c_b;
        t[third] = c;
        if face_ok(t[0], t[1], t[2]) {
            debug_assert!(found.is_none(), "face completion is unique");
            found = Some(c);
        }
    }
    found
}

/// Precomputed `complete_face` table indexed by `(pos_a, pos_b, c_a, c_b)`.
pub(crate) struct CompletionTable([[Option<Color>; 16]; 9]);

impl CompletionTable {
    pub(crate) fn new() -> Self {
        let mut t = [[None; 16]; 9];
        for pa in 0..3 {
            for pb in 0..3 {
                if pa == pb {
                    continue;
                }
                for ca in Color::ALL {
                    for cb in Color::ALL {
                        t[pa * 3 + pb][ca.code() * 4 + cb.code()] = complete_face(pa, ca, pb, cb);
                    }
                }
            }
        }
        CompletionTable(t)
    }

    #[inline]
    pub(crate) fn get(&self, pa: usize, ca: Color, pb: usize, cb: Color) -> Option<Color> {
        self.0[pa * 3 + pb][ca.code() * 4 + cb.code()]
    }
}

/// Count of pairs `j < i` with `u_j = 1` and `u_i = 0`.
fn inversions<I: IntoIterator<Item = u8>>(it: I) -> u64 {
    let mut ones = 0u64;
    let mut g = 0u64;
    for x in it {
        match x {
            1 => ones += 1,
            0 => g += ones,
            _ => {}
        }
    }
    g
}

/// `G(u)` for a `012` string: each `0` counts the `1`s before it; `2`s are ignored.
pub fn string_g(u: &str) -> Result<u64> {
    let digits = parse_012(u)?;
    Ok(inversions(digits))
}

fn parse_012(u: &str) -> Result<Vec<u8>> {
    u.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            other => Err(Error::InvalidSymbol(other)),
        })
        .collect()
}

/// Three 0/1 side strings in increasing-height order.
///
/// Side 0 reads east to west along the bottom, side 1 from the apex down,
/// side 2 from the bottom-left corner up. Taken together this is the
/// clockwise reading of the boundary that starts at the bottom-left corner
/// (sides 2, 1, 0 in that order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryCondition {
    sides: [Vec<u8>; 3],
}

impl BoundaryCondition {
    pub fn new(sides: [Vec<u8>; 3]) -> Result<Self> {
        let n = sides[0].len();
        if n == 0 {
            return Err(Error::InvalidSize(0));
        }
        let zeros = |s: &[u8]| s.iter().filter(|&&x| x == 0).count();
        for s in &sides {
            if s.len() != n {
                return Err(Error::BoundaryMismatch(format!(
                    "side lengths differ ({} vs {n})",
                    s.len()
                )));
            }
            if let Some(&x) = s.iter().find(|&&x| x > 1) {
                return Err(Error::InvalidSymbol(char::from(b'0' + x)));
            }
        }
        let n0 = zeros(&sides[0]);
        if sides.iter().any(|s| zeros(s) != n0) {
            return Err(Error::BoundaryMismatch(
                "every side must carry the same number of zeros".into(),
            ));
        }
        Ok(BoundaryCondition { sides })
    }

    pub fn from_strs(s0: &str, s1: &str, s2: &str) -> Result<Self> {
        let p = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::InvalidSymbol(other)),
                })
                .collect()
        };
        Self::new([p(s0)?, p(s1)?, p(s2)?])
    }

    /// All-zero boundary of size `n`.
    pub fn zeros(n: usize) -> Self {
        BoundaryCondition {
            sides: [vec![0; n], vec![0; n], vec![0; n]],
        }
    }

    pub fn n(&self) -> usize {
        self.sides[0].len()
    }

    pub fn n0(&self) -> usize {
        self.sides[0].iter().filter(|&&x| x == 0).count()
    }

    pub fn n1(&self) -> usize {
        self.n() - self.n0()
    }

    pub fn side(&self, l: u8) -> &[u8] {
        &self.sides[l as usize]
    }

    pub fn side_string(&self, l: u8) -> String {
        self.side(l).iter().map(|&x| char::from(b'0' + x)).collect()
    }

    pub fn gash_number(&self, l: u8) -> u64 {
        inversions(self.side(l).iter().copied())
    }

    /// Every boundary of size `n` with `n0` zeros per side, in lexicographic order.
    pub fn all_with(n: usize, n0: usize) -> Vec<BoundaryCondition> {
        let strings = binary_strings(n, n0);
        let mut out = Vec::with_capacity(strings.len().pow(3));
        for a in &strings {
            for b in &strings {
                for c in &strings {
                    out.push(BoundaryCondition {
                        sides: [a.clone(), b.clone(), c.clone()],
                    });
                }
            }
        }
        out
    }

    /// Every boundary of size `n`, over all `n0`.
    pub fn all(n: usize) -> Vec<BoundaryCondition> {
        (0..=n).flat_map(|n0| Self::all_with(n, n0)).collect()
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.side_string(0),
            self.side_string(1),
            self.side_string(2)
        )
    }
}

/// All 0/1 strings of length `n` with exactly `n0` zeros, lexicographically.
pub fn binary_strings(n: usize, n0: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let v: Vec<u8> = (0..n).rev().map(|i| ((mask >> i) & 1) as u8).collect();
        if v.iter().filter(|&&x| x == 0).count() == n0 {
            out.push(v);
        }
    }
    out
}

/// `(m_pred, s_pred)`; negative values certify that no map has this boundary.
pub fn predict_counts(b: &BoundaryCondition) -> (i64, i64) {
    let g: i64 = (0..3).map(|l| b.gash_number(l) as i64).sum();
    let nn = (b.n0() * b.n1()) as i64;
    (g - nn, 2 * nn - g)
}

/// Label-7 and soft-crossing counts for a two-step puzzle with boundary
/// strings `u` (left), `v` (right), `w` (bottom).
pub fn predict_puzzle_counts(u: &str, v: &str, w: &str) -> Result<(i64, i64)> {
    let strs = [parse_012(u)?, parse_012(v)?, parse_012(w)?];
    let count = |s: &[u8], d: u8| s.iter().filter(|&&x| x == d).count();
    let (n0, n1) = (count(&strs[0], 0), count(&strs[0], 1));
    for (name, s) in ["v", "w"].iter().zip(&strs[1..]) {
        if count(s, 0) != n0 || count(s, 1) != n1 {
            return Err(Error::BoundaryMismatch(format!(
                "{name} has {} zeros and {} ones, u has {n0} and {n1}",
                count(s, 0),
                count(s, 1)
            )));
        }
    }
    let g: i64 = strs
        .iter()
        .map(|s| inversions(s.iter().copied()) as i64)
        .sum();
    let nn = (n0 * n1) as i64;
    Ok((g - nn, 2 * nn - g))
}

/// A total coloring of the edges of `T_n`, in canonical edge order.
///
/// Construction does not check face validity; call [`ColorMap::validate`].
#[derive(Clone)]
pub struct ColorMap {
    lattice: Arc<Lattice>,
    colors: Vec<Color>,
}

impl PartialEq for ColorMap {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.colors == other.colors
    }
}

impl Eq for ColorMap {}

impl std::hash::Hash for ColorMap {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n().hash(state);
        self.colors.hash(state);
    }
}

impl PartialOrd for ColorMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ColorMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n(), &self.colors).cmp(&(other.n(), &other.colors))
    }
}

impl fmt::Debug for ColorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.colors.iter().map(|c| c.as_char()).collect();
        write!(f, "ColorMap(n={}, {s})", self.n())
    }
}

impl ColorMap {
    pub fn from_colors(n: usize, colors: Vec<Color>) -> Result<Self> {
        let lattice = Lattice::shared(n)?;
        if colors.len() != lattice.num_edges() {
            return Err(Error::InvalidMap(format!(
                "expected {} colors, got {}",
                lattice.num_edges(),
                colors.len()
            )));
        }
        Ok(ColorMap { lattice, colors })
    }

    pub(crate) fn from_parts(lattice: Arc<Lattice>, colors: Vec<Color>) -> Self {
        debug_assert_eq!(colors.len(), lattice.num_edges());
        ColorMap { lattice, colors }
    }

    pub fn uniform(n: usize, c: Color) -> Result<Self> {
        let lattice = Lattice::shared(n)?;
        let colors = vec![c; lattice.num_edges()];
        Ok(ColorMap { lattice, colors })
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Colors in canonical edge order.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub(crate) fn colors_mut(&mut self) -> &mut [Color] {
        &mut self.colors
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.lattice.index(e).map(|i| self.colors[i])
    }

    pub fn at(&self, index: usize) -> Color {
        self.colors[index]
    }

    /// Return a copy with one edge recolored.
    pub fn with(&self, e: EdgeId, c: Color) -> Result<ColorMap> {
        let i = self.lattice.index(e).ok_or(Error::OutOfLattice {
            r: e.origin.r,
            s: e.origin.s,
            n: self.n(),
        })?;
        let mut out = self.clone();
        out.colors[i] = c;
        Ok(out)
    }

    pub fn face_colors(&self, face: usize) -> [Color; 3] {
        self.lattice.face_edge_indices(face).map(|i| self.colors[i])
    }

    pub fn face_valid(&self, face: usize) -> bool {
        let [a, b, c] = self.face_colors(face);
        face_ok(a, b, c)
    }

    /// Faces that fail the clockwise-triple test, by sweep index.
    pub fn invalid_faces(&self) -> Vec<usize> {
        (0..self.lattice.faces().len())
            .filter(|&f| !self.face_valid(f))
            .collect()
    }

    /// Every face admissible and every boundary edge a line color.
    pub fn validate(&self) -> bool {
        (0..3).all(|l| self.lattice.side(l).all(|i| self.colors[i].is_line()))
            && (0..self.lattice.faces().len()).all(|f| self.face_valid(f))
    }

    /// Boundary colors of side `l`, increasing height.
    pub fn side_colors(&self, l: u8) -> Vec<Color> {
        self.lattice.side(l).map(|i| self.colors[i]).collect()
    }

    pub fn side_string(&self, l: u8) -> String {
        self.side_colors(l).iter().map(|c| c.as_char()).collect()
    }

    pub fn boundary(&self) -> Result<BoundaryCondition> {
        let side = |l: u8| -> Result<Vec<u8>> {
            self.side_colors(l)
                .into_iter()
                .map(|c| match c {
                    Color::Zero => Ok(0),
                    Color::One => Ok(1),
                    other => Err(Error::InvalidMap(format!("boundary edge colored {other}"))),
                })
                .collect()
        };
        BoundaryCondition::new([side(0)?, side(1)?, side(2)?])
    }

    /// `G(C, l)`.
    pub fn gash_number(&self, l: u8) -> u64 {
        inversions(self.lattice.side(l).map(|i| match self.colors[i] {
            Color::Zero => 0,
            Color::One => 1,
            _ => 2,
        }))
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }

    /// Monochrome faces of color `j`, as `(direct, reversed)`.
    pub fn count_mono_faces(&self, j: Color) -> (usize, usize) {
        let mut direct = 0;
        let mut reversed = 0;
        for (fi, f) in self.lattice.faces().iter().enumerate() {
            if self.face_colors(fi) == [j; 3] {
                match f.orientation {
                    Orientation::Direct => direct += 1,
                    Orientation::Reversed => reversed += 1,
                }
            }
        }
        (direct, reversed)
    }

    /// Number of zeros per side, assuming a balanced boundary.
    pub fn n0(&self) -> usize {
        self.side_colors(0)
            .iter()
            .filter(|&&c| c == Color::Zero)
            .count()
    }

    pub fn n1(&self) -> usize {
        self.n() - self.n0()
    }

    /// Canonical text form: `n <n>` then `<type> <r> <s> <color>` per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (e, c) in self.lattice.edges().iter().zip(&self.colors) {
            out.push_str(&format!(
                "{} {} {} {}\n",
                e.edge_type, e.origin.r, e.origin.s, c
            ));
        }
        out
    }

    /// Parse the canonical text form. Edges must appear in canonical order.
    pub fn parse(text: &str) -> Result<ColorMap> {
        let mut lines = text.split_terminator('\n').enumerate();
        let perr = |line: usize, msg: String| Error::Parse {
            line: line + 1,
            msg,
        };
        let (_, header) = lines.next().ok_or_else(|| perr(0, "empty input".into()))?;
        let n: usize = header
            .strip_prefix("n ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(0, format!("expected `n <size>`, found {header:?}")))?;
        if n == 0 {
            return Err(perr(0, "size must be at least 1".into()));
        }
        let lattice = Lattice::shared(n)?;
        let mut colors = Vec::with_capacity(lattice.num_edges());
        for (k, expected) in lattice.edges().iter().enumerate() {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| perr(k + 1, format!("missing edge {expected}")))?;
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 4 {
                return Err(perr(
                    ln,
                    format!("expected 4 fields, found {}", fields.len()),
                ));
            }
            let want = [
                expected.edge_type.to_string(),
                expected.origin.r.to_string(),
                expected.origin.s.to_string(),
            ];
            if fields[..3] != want {
                return Err(perr(
                    ln,
                    format!("expected edge {expected}, found {line:?}"),
                ));
            }
            let mut chars = fields[3].chars();
            let c = match (chars.next().and_then(Color::from_char), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(perr(ln, format!("bad color {:?}", fields[3]))),
            };
            colors.push(c);
        }
        if let Some((ln, line)) = lines.next() {
            return Err(perr(ln, format!("trailing content {line:?}")));
        }
        if !text.ends_with('\n') {
            return Err(perr(lattice.num_edges(), "missing final newline".into()));
        }
        Ok(ColorMap { lattice, colors })
    }
}

impl FromStr for ColorMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ColorMap::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_ok_examples() {
        assert!(face_ok(C0, C1, CM));
        assert!(face_ok(C0, C0, C0));
        assert!(!face_ok(C0, CM, C1));
        let mut valid = 0;
        for a in Color::ALL {
            for b in Color::ALL {
                for c in Color::ALL {
                    if face_ok(a, b, c) {
                        valid += 1;
                        // closed under rotation
                        assert!(face_ok(b, c, a));
                    }
                }
            }
        }
        assert_eq!(valid, 8);
    }

    #[test]
    fn complete_face_examples() {
        assert_eq!(complete_face(0, C0, 1, C1), Some(CM));
        assert_eq!(complete_face(0, C0, 1, C0), Some(C0));
        assert_eq!(complete_face(0, C3, 1, CM), None);
    }

    #[test]
    fn completion_is_unique_everywhere() {
        // complete_face debug-asserts uniqueness; scanning every pair exercises it
        let t = CompletionTable::new();
        for pa in 0..3 {
            for pb in 0..3 {
                if pa != pb {
                    for a in Color::ALL {
                        for b in Color::ALL {
                            assert_eq!(t.get(pa, a, pb, b), complete_face(pa, a, pb, b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn string_g_examples() {
        assert_eq!(string_g("10110").unwrap(), 4);
        assert_eq!(string_g("00011").unwrap(), 0);
        assert_eq!(string_g("2102").unwrap(), 1);
        assert!(string_g("10x").is_err());
    }

    #[test]
    fn predict_examples() {
        let sample = BoundaryCondition::from_strs("10110", "11001", "01011").unwrap();
        assert_eq!(
            (0..3).map(|l| sample.gash_number(l)).collect::<Vec<_>>(),
            vec![4, 4, 1]
        );
        assert_eq!(predict_counts(&sample), (3, 3));
        assert_eq!(predict_counts(&BoundaryCondition::zeros(4)), (0, 0));
        let b = BoundaryCondition::from_strs("01", "01", "01").unwrap();
        assert_eq!(predict_counts(&b), (-1, 2));
    }

    #[test]
    fn puzzle_examples() {
        assert_eq!(predict_puzzle_counts("01", "01", "01").unwrap(), (-1, 2));
        for (n0, n1) in [(1usize, 1usize), (2, 3), (3, 1)] {
            let s = "1".repeat(n1) + &"0".repeat(n0);
            let nn = (n0 * n1) as i64;
            assert_eq!(predict_puzzle_counts(&s, &s, &s).unwrap(), (2 * nn, -nn));
        }
        assert_eq!(
            predict_puzzle_counts("10110", "11001", "01011").unwrap(),
            (3, 3)
        );
        assert_eq!(predict_puzzle_counts("2120", "10", "01").unwrap(), (1, 0));
        assert!(predict_puzzle_counts("01", "001", "01").is_err());
    }

    #[test]
    fn boundary_condition_checks() {
        assert!(BoundaryCondition::from_strs("01", "00", "01").is_err());
        assert!(BoundaryCondition::from_strs("01", "011", "01").is_err());
        assert!(BoundaryCondition::from_strs("0a", "01", "01").is_err());
        assert_eq!(BoundaryCondition::all(2).len(), 1 + 8 + 1);
        assert_eq!(BoundaryCondition::all(5).len(), 2252);
    }

    #[test]
    fn uniform_maps() {
        let m = ColorMap::uniform(3, C0).unwrap();
        assert!(m.validate());
        assert_eq!(m.count_color(C0), 18);
        assert_eq!(m.count_mono_faces(C0), (6, 3));
        for l in 0..3 {
            assert_eq!(m.gash_number(l), 0);
        }
        let lat = m.lattice().clone();
        let interior = (0..lat.num_edges()).find(|&i| !lat.is_boundary(i)).unwrap();
        let bad = m.with(lat.edges()[interior], C1).unwrap();
        assert!(!bad.validate());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let m = ColorMap::uniform(2, C1).unwrap();
        let t = m.to_text();
        assert!(t.starts_with("n 2\n0 1 0 1\n"));
        let back = ColorMap::parse(&t).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), t);
        let err = ColorMap::parse(&t.replace("0 1 0 1\n", "0 1 0 x\n")).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "bad color \"x\"".into()
            }
        );
        assert!(matches!(
            ColorMap::parse("n 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ColorMap::parse(&t[..t.len() - 1]).is_err());
    }
}
