//! Reduced color maps as families of non-intersecting lattice paths.
//!
//! In a reduced map the triangle `T[n₀, n₀, (0,0)]` is all 0 and every other
//! 0-edge has type 1. Each 0-edge on the hypotenuse of that triangle starts a
//! path that crosses one 3 or m lozenge per step until it reaches side 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colormap::{Color, ColorMap};
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Lattice, Vertex};
use crate::transforms::{bottom_structure, Trapeze};

/// `V` crosses a 3-lozenge (its 3 edge has type 0), `H` an m-lozenge (m edge of type 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    H,
    V,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::H => 'H',
            Step::V => 'V',
        }
    }
}

/// Paths `p_1 … p_{n₀}`; path `i` starts at the type-1 edge with origin
/// `(n₀ − i, i)` and takes `n₁` steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathFamily {
    pub n: usize,
    pub paths: Vec<Vec<Step>>,
}

impl PathFamily {
    pub fn n0(&self) -> usize {
        self.paths.len()
    }

    pub fn n1(&self) -> usize {
        self.n - self.n0()
    }

    /// Origin of the type-1 edge under the front of each path after each
    /// step; `fronts()[k][i]` is path `i+1` after `k` steps.
    pub fn fronts(&self) -> Vec<Vec<Vertex>> {
        let n0 = self.n0() as i32;
        let mut cur: Vec<Vertex> = (1..=n0).map(|i| Vertex::new(n0 - i, i)).collect();
        let mut out = vec![cur.clone()];
        for k in 0..self.n1() {
            for (z, p) in cur.iter_mut().zip(&self.paths) {
                *z = match p.get(k) {
                    Some(Step::V) => Vertex::new(z.r, z.s + 1),
                    Some(Step::H) => Vertex::new(z.r + 1, z.s),
                    None => *z,
                };
            }
            out.push(cur.clone());
        }
        out
    }

    /// Heights of the side-1 edges where the paths end, `h(e_1) > … > h(e_{n₀})`.
    pub fn target_heights(&self) -> Vec<usize> {
        self.fronts()
            .last()
            .map_or_else(Vec::new, |f| f.iter().map(|z| z.r as usize).collect())
    }

    /// Well-formedness: `n₁` steps each, fronts strictly ordered at every step.
    pub fn check(&self) -> Result<()> {
        if self.n0() > self.n {
            return Err(Error::InvalidMap(format!(
                "{} paths on T_{}",
                self.n0(),
                self.n
            )));
        }
        if let Some(i) = self.paths.iter().position(|p| p.len() != self.n1()) {
            return Err(Error::InvalidMap(format!(
                "path {} has {} steps, expected {}",
                i + 1,
                self.paths[i].len(),
                self.n1()
            )));
        }
        for (k, front) in self.fronts().iter().enumerate() {
            if front.windows(2).any(|w| w[0].s >= w[1].s) {
                return Err(Error::InvalidMap(format!("paths meet after {k} steps")));
            }
        }
        Ok(())
    }

    /// Rebuild the reduced map: the triangle is 0, each step writes its
    /// lozenge, everything else in the remaining region is 1.
    pub fn reconstruct(&self) -> Result<ColorMap> {
        self.check()?;
        let lattice = Lattice::shared(self.n)?;
        let mut colors = vec![Color::One; lattice.num_edges()];
        let tri = Trapeze {
            r: self.n0(),
            s: self.n0(),
            origin: Vertex::new(0, 0),
        };
        for i in tri.edges(&lattice) {
            colors[i] = Color::Zero;
        }
        let mut set = |e: EdgeId, c: Color| -> Result<()> {
            let i = lattice
                .index(e)
                .ok_or_else(|| Error::InvalidMap(format!("path leaves the lattice at {e}")))?;
            colors[i] = c;
            Ok(())
        };
        let fronts = self.fronts();
        for (i, p) in self.paths.iter().enumerate() {
            for (k, step) in p.iter().enumerate() {
                let z = fronts[k][i];
                set(EdgeId::new(1, z.r, z.s), Color::Zero)?;
                match step {
                    Step::V => {
                        set(EdgeId::new(0, z.r + 1, z.s), Color::Three)?;
                        set(EdgeId::new(1, z.r, z.s + 1), Color::Zero)?;
                    }
                    Step::H => {
                        set(EdgeId::new(2, z.r + 1, z.s - 1), Color::M)?;
                        set(EdgeId::new(1, z.r + 1, z.s), Color::Zero)?;
                    }
                }
            }
        }
        let map = ColorMap::from_colors(self.n, colors)?;
        if !map.validate() {
            return Err(Error::InvalidMap(
                "path family does not give a valid map".into(),
            ));
        }
        Ok(map)
    }

    /// `n` header line, then one line of `H`/`V` per path.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for p in &self.paths {
            out.extend(p.iter().map(|s| s.as_char()));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<PathFamily> {
        let mut lines = text.split_terminator('\n');
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n = header
            .strip_prefix("n ")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected `n <size>`, got {header:?}"),
            })?;
        let mut paths = Vec::new();
        for (k, line) in lines.enumerate() {
            let steps = line
                .chars()
                .map(|ch| match ch {
                    'H' => Ok(Step::H),
                    'V' => Ok(Step::V),
                    other => Err(Error::Parse {
                        line: k + 2,
                        msg: format!("unexpected {other:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            paths.push(steps);
        }
        let pf = PathFamily { n, paths };
        pf.check()?;
        Ok(pf)
    }
}

impl fmt::Display for PathFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PathFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PathFamily::parse(s)
    }
}

/// `G(C,2) = 0` and the bottom reads `0^{n₀}1^{n₁}` west to east.
pub fn is_reduced(c: &ColorMap) -> bool {
    bottom_structure(c).is_ok_and(|bs| bs.is_reduced())
}

/// Read the path family off a reduced map.
pub fn extract_paths(c: &ColorMap) -> Result<PathFamily> {
    if !is_reduced(c) {
        return Err(Error::Precondition("map is not reduced".into()));
    }
    let lattice = c.lattice();
    let (n, n0, n1) = (c.n(), c.n0(), c.n1());
    let tri = Trapeze {
        r: n0,
        s: n0,
        origin: Vertex::new(0, 0),
    };
    let tri_edges = tri.edges(lattice);
    if let Some(&i) = tri_edges.iter().find(|&&i| c.at(i) != Color::Zero) {
        return Err(Error::Internal(format!(
            "edge {} of the zero triangle is {}",
            lattice.edges()[i],
            c.at(i)
        )));
    }
    for (i, e) in lattice.edges().iter().enumerate() {
        if c.at(i) == Color::Zero && e.edge_type != 1 && tri_edges.binary_search(&i).is_err() {
            return Err(Error::Internal(format!(
                "0-edge {e} of type {} outside the zero triangle",
                e.edge_type
            )));
        }
    }
    let get = |e: EdgeId| {
        c.get(e)
            .ok_or_else(|| Error::Internal(format!("path leaves the lattice at {e}")))
    };
    let mut fronts: Vec<Vertex> = (1..=n0 as i32)
        .map(|i| Vertex::new(n0 as i32 - i, i))
        .collect();
    let mut paths = vec![Vec::with_capacity(n1); n0];
    for _ in 0..n1 {
        for (z, path) in fronts.iter_mut().zip(&mut paths) {
            if get(EdgeId::new(1, z.r, z.s))? != Color::Zero {
                return Err(Error::Internal(format!(
                    "path front at {z} is not on a 0-edge"
                )));
            }
            let top = get(EdgeId::new(0, z.r + 1, z.s))?;
            let right = get(EdgeId::new(2, z.r + 1, z.s - 1))?;
            match (top, right) {
                (Color::Three, _) => {
                    path.push(Step::V);
                    z.s += 1;
                }
                (Color::One, Color::M) => {
                    path.push(Step::H);
                    z.r += 1;
                }
                _ => {
                    return Err(Error::Internal(format!(
                        "no lozenge to cross at {z} ({top}, {right})"
                    )))
                }
            }
        }
        if fronts.windows(2).any(|w| w[0].s >= w[1].s) {
            return Err(Error::Internal("paths intersect".into()));
        }
    }
    for z in &fronts {
        if z.r + z.s != n as i32 || get(EdgeId::new(1, z.r, z.s))? != Color::Zero {
            return Err(Error::Internal(format!(
                "path ends at {z}, not on a 0-edge of side 1"
            )));
        }
    }
    Ok(PathFamily { n, paths })
}

/// `(n_m, n_3)`: horizontal and vertical step totals, the latter from the
/// endpoints as `Σ_i (n − h(e_i) − i)`.
pub fn step_counts(pf: &PathFamily) -> (usize, usize) {
    let n3: usize = pf
        .target_heights()
        .iter()
        .enumerate()
        .map(|(i, &h)| pf.n - h - (i + 1))
        .sum();
    (pf.n0() * pf.n1() - n3, n3)
}

pub fn binomial(n: usize, k: i64) -> i128 {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = (k as usize).min(n - k as usize);
    (0..k).fold(1i128, |acc, j| acc * (n - j) as i128 / (j + 1) as i128)
}

/// Heights of the 0-edges of a side-1 string (increasing height), highest first.
fn zero_heights(side1: &str) -> Result<Vec<usize>> {
    let mut hs = Vec::new();
    for (h, ch) in side1.chars().enumerate() {
        match ch {
            '0' => hs.push(h),
            '1' => {}
            other => return Err(Error::InvalidSymbol(other)),
        }
    }
    hs.reverse();
    Ok(hs)
}

/// `a_{ij} = binom(n₁, n − h(e_j) − i)`, zero outside `0..=n₁`.
pub fn lgv_matrix(side1: &str) -> Result<Vec<Vec<i128>>> {
    let hs = zero_heights(side1)?;
    let n = side1.chars().count();
    let n1 = n - hs.len();
    Ok((1..=hs.len())
        .map(|i| {
            hs.iter()
                .map(|&h| binomial(n1, n as i64 - h as i64 - i as i64))
                .collect()
        })
        .collect())
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(mut a: Vec<Vec<i128>>) -> Result<i128> {
    let k = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| a[r][c] != 0) else {
            return Ok(0);
        };
        if piv != c {
            a.swap(piv, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let num = a[r][j]
                    .checked_mul(a[c][c])
                    .and_then(|x| x.checked_sub(a[r][c].checked_mul(a[c][j])?))
                    .ok_or(Error::Overflow("determinant"))?;
                a[r][j] = num / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    Ok(if k == 0 { 1 } else { sign * a[k - 1][k - 1] })
}

/// Number of reduced maps whose side-1 string is `side1`.
pub fn lgv_count(side1: &str) -> Result<i128> {
    determinant(lgv_matrix(side1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colormap::BoundaryCondition;
    use crate::enumerate::{enumerate, for_each_map};
    use proptest::prelude::*;

    fn reduced_maps(n: usize) -> Vec<ColorMap> {
        let mut out = Vec::new();
        for b in BoundaryCondition::all(n) {
            for_each_map(&b, |c| {
                if is_reduced(&c) {
                    out.push(c)
                }
            })
            .unwrap();
        }
        out
    }

    #[test]
    fn reduced_predicate() {
        assert!(is_reduced(&ColorMap::uniform(3, Color::Zero).unwrap()));
        assert!(is_reduced(&ColorMap::uniform(3, Color::One).unwrap()));
        let b = BoundaryCondition::from_strs("10110", "11001", "01011").unwrap();
        for c in enumerate(&b).unwrap() {
            assert!(!is_reduced(&c));
        }
    }

    #[test]
    fn single_path() {
        let b = BoundaryCondition::from_strs("10", "01", "01").unwrap();
        let maps = enumerate(&b).unwrap();
        assert_eq!(maps.len(), 1);
        let pf = extract_paths(&maps[0]).unwrap();
        assert_eq!(pf.paths, vec![vec![Step::V]]);
        assert_eq!(step_counts(&pf), (0, 1));
        assert_eq!(lgv_count("01").unwrap(), 1);
        assert_eq!(pf.reconstruct().unwrap(), maps[0]);
    }

    #[test]
    fn empty_families() {
        let z = ColorMap::uniform(3, Color::Zero).unwrap();
        let pf = extract_paths(&z).unwrap();
        assert_eq!(pf.paths, vec![Vec::<Step>::new(); 3]);
        assert_eq!(step_counts(&pf), (0, 0));
        let ones = ColorMap::uniform(3, Color::One).unwrap();
        let pf = extract_paths(&ones).unwrap();
        assert!(pf.paths.is_empty());
        assert_eq!(pf.reconstruct().unwrap(), ones);
        assert_eq!(lgv_count("111").unwrap(), 1);
        assert_eq!(lgv_count("").unwrap(), 1);
    }

    #[test]
    fn paths_on_all_reduced_maps() {
        for n in 1..=4 {
            for c in reduced_maps(n) {
                let pf = extract_paths(&c).unwrap();
                pf.check().unwrap();
                let (nm, n3) = step_counts(&pf);
                let h = pf.paths.iter().flatten().filter(|&&s| s == Step::H).count();
                assert_eq!(nm, h);
                assert_eq!(nm as u64, c.gash_number(1));
                assert_eq!(n3 as u64, (c.n0() * c.n1()) as u64 - c.gash_number(1));
                assert_eq!(nm, c.count_color(Color::M));
                assert_eq!(n3, c.count_color(Color::Three));
                assert_eq!(pf.reconstruct().unwrap(), c);
                assert_eq!(PathFamily::parse(&pf.to_text()).unwrap(), pf);
            }
        }
    }

    #[test]
    fn lgv_matches_enumeration() {
        for n in 1..=4 {
            let mut counts = std::collections::HashMap::<String, i128>::new();
            for c in reduced_maps(n) {
                *counts.entry(c.side_string(1)).or_default() += 1;
            }
            for n0 in 0..=n {
                for bits in crate::colormap::binary_strings(n, n0) {
                    let s: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
                    assert_eq!(
                        lgv_count(&s).unwrap(),
                        counts.get(&s).copied().unwrap_or(0),
                        "{s}"
                    );
                }
            }
        }
    }

    #[test]
    fn lgv_support_convention() {
        // "10" at n = 2: the only entry has n − h − i = 0, which still counts one path.
        assert_eq!(lgv_matrix("10").unwrap(), vec![vec![1]]);
        assert_eq!(lgv_matrix("01").unwrap(), vec![vec![1]]);
        assert_eq!(lgv_matrix("0011").unwrap(), vec![vec![1, 0], vec![2, 1]]);
        assert_eq!(lgv_matrix("1100").unwrap(), vec![vec![1, 2], vec![0, 1]]);
        assert_eq!(lgv_matrix("0101").unwrap(), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(lgv_count("0101").unwrap(), 2);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(
            PathFamily::parse(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PathFamily::parse("n 2\nVX\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(PathFamily::parse("n 3\nVH\nHV\n").is_err());
        let pf = PathFamily::parse("n 3\nV\nV\n").unwrap();
        assert_eq!(pf.to_text(), "n 3\nV\nV\n");
        assert!(matches!(lgv_count("0a1"), Err(Error::InvalidSymbol('a'))));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(vec![]).unwrap(), 1);
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            determinant(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap(),
            0
        );
        assert_eq!(determinant(vec![vec![4, 3], vec![6, 3]]).unwrap(), -6);
    }

    fn naive_det(a: &[Vec<i128>]) -> i128 {
        let k = a.len();
        if k == 0 {
            return 1;
        }
        (0..k)
            .map(|j| {
                let minor: Vec<Vec<i128>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * naive_det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor(k in 0usize..5, seed in proptest::collection::vec(-6i128..7, 25)) {
            let a: Vec<Vec<i128>> = (0..k).map(|r| (0..k).map(|c| seed[r * 5 + c]).collect()).collect();
            prop_assert_eq!(determinant(a.clone()).unwrap(), naive_det(&a));
        }

        #[test]
        fn binomial_row_sums(n in 0usize..30) {
            let total: i128 = (0..=n as i64).map(|k| binomial(n, k)).sum();
            prop_assert_eq!(total, 1i128 << n);
            prop_assert_eq!(binomial(n, -1), 0);
            prop_assert_eq!(binomial(n, n as i64 + 1), 0);
        }
    }
}
