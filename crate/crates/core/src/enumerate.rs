//! Exhaustive enumeration of color maps with a fixed boundary.
//!
//! Faces are swept strip by strip from the bottom. Whenever two edges of a
//! face are known the third is forced (or the branch dies), so the search
//! only branches on edges that no face constrains yet.

use std::sync::Arc;

use rayon::prelude::*;

use crate::colormap::{BoundaryCondition, Color, ColorMap, CompletionTable};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

const UNKNOWN: u8 = 4;

/// Largest size [`naive_filter`] accepts.
pub const NAIVE_GUARD: usize = 3;

fn color_of(code: u8) -> Color {
    Color::ALL[code as usize]
}

/// A partial coloring with an undo trail.
#[derive(Clone)]
struct Search<'a> {
    lattice: &'a Lattice,
    table: &'a CompletionTable,
    colors: Vec<u8>,
    trail: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(
        lattice: &'a Lattice,
        table: &'a CompletionTable,
        b: &BoundaryCondition,
    ) -> Option<Self> {
        let mut s = Search {
            lattice,
            table,
            colors: vec![UNKNOWN; lattice.num_edges()],
            trail: Vec::new(),
        };
        let mut queue = Vec::new();
        for l in 0..3u8 {
            for (i, &bit) in lattice.side(l).zip(b.side(l)) {
                s.colors[i] = bit;
                queue.push(i);
            }
        }
        s.propagate(queue).then_some(s)
    }

    fn assign(&mut self, edge: usize, code: u8) {
        debug_assert_eq!(self.colors[edge], UNKNOWN);
        self.colors[edge] = code;
        self.trail.push(edge);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("trail");
            self.colors[e] = UNKNOWN;
        }
    }

    /// Unit propagation from the given edges. Returns false on a dead face.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(edge) = queue.pop() {
            for f in self.lattice.incident_faces(edge) {
                let idx = self.lattice.face_edge_indices(f);
                let cs = idx.map(|i| self.colors[i]);
                let unknown: Vec<usize> = (0..3).filter(|&k| cs[k] == UNKNOWN).collect();
                match unknown.len() {
                    0 => {
                        if !crate::colormap::face_ok(
                            color_of(cs[0]),
                            color_of(cs[1]),
                            color_of(cs[2]),
                        ) {
                            return false;
                        }
                    }
                    1 => {
                        let k = unknown[0];
                        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
                        match self.table.get(a, color_of(cs[a]), b, color_of(cs[b])) {
                            Some(c) => {
                                self.assign(idx[k], c as u8);
                                queue.push(idx[k]);
                            }
                            None => return false,
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    /// First face at or after `start` with an undetermined edge, and that edge.
    fn next_branch(&self, start: usize) -> Option<(usize, usize)> {
        let faces = self.lattice.faces().len();
        (start..faces).find_map(|f| {
            self.lattice
                .face_edge_indices(f)
                .into_iter()
                .find(|&i| self.colors[i] == UNKNOWN)
                .map(|e| (f, e))
        })
    }

    fn run<F: FnMut(&[u8])>(&mut self, start: usize, visit: &mut F) {
        let Some((face, edge)) = self.next_branch(start) else {
            visit(&self.colors);
            return;
        };
        for code in 0..4u8 {
            let mark = self.trail.len();
            self.assign(edge, code);
            if self.propagate(vec![edge]) {
                self.run(face, visit);
            }
            self.undo_to(mark);
        }
    }

    /// Split the search into independent subproblems after `depth` branchings,
    /// in branch order.
    fn frontier(mut self, depth: usize) -> Vec<(Search<'a>, usize)> {
        let mut out = Vec::new();
        self.split(0, depth, &mut out);
        out
    }

    fn split(&mut self, start: usize, depth: usize, out: &mut Vec<(Search<'a>, usize)>) {
        let next = self.next_branch(start);
        let (face, edge) = match next {
            Some(fe) if depth > 0 => fe,
            _ => {
                let mut leaf = self.clone();
                leaf.trail.clear();
                out.push((leaf, start));
                return;
            }
        };
        for code in 0..4u8 {
            let mark = self.trail.len();
            self.assign(edge, code);
            if self.propagate(vec![edge]) {
                self.split(face, depth - 1, out);
            }
            self.undo_to(mark);
        }
    }
}

thread_local! {
    static TABLE: CompletionTable = CompletionTable::new();
}

fn with_search<R>(
    b: &BoundaryCondition,
    f: impl FnOnce(Option<Search<'_>>, &Arc<Lattice>) -> R,
) -> Result<R> {
    let lattice = Lattice::shared(b.n())?;
    Ok(TABLE.with(|table| {
        let s = Search::new(&lattice, table, b);
        f(s, &lattice)
    }))
}

/// Call `visit` on every valid map with boundary `b`, in search order.
pub fn for_each_map(b: &BoundaryCondition, mut visit: impl FnMut(ColorMap)) -> Result<()> {
    with_search(b, |s, lattice| {
        if let Some(mut s) = s {
            s.run(0, &mut |codes: &[u8]| {
                let colors = codes.iter().map(|&c| color_of(c)).collect();
                visit(ColorMap::from_parts(Arc::clone(lattice), colors));
            });
        }
    })
}

/// Every valid color map with boundary `b`, each once, sorted by colors in
/// canonical edge order (`0 < 1 < 3 < m`).
pub fn enumerate(b: &BoundaryCondition) -> Result<Vec<ColorMap>> {
    let mut out = Vec::new();
    for_each_map(b, |m| out.push(m))?;
    out.sort();
    Ok(out)
}

/// Number of valid maps with boundary `b`.
pub fn count(b: &BoundaryCondition) -> Result<u64> {
    with_search(b, |s, _| {
        let mut total = 0u64;
        if let Some(mut s) = s {
            s.run(0, &mut |_| total += 1);
        }
        total
    })
}

/// [`count`] split over the first `depth` branch decisions and summed in parallel.
pub fn count_parallel(b: &BoundaryCondition, depth: usize) -> Result<u64> {
    let lattice = Lattice::shared(b.n())?;
    let table = CompletionTable::new();
    let Some(root) = Search::new(&lattice, &table, b) else {
        return Ok(0);
    };
    let jobs = root.frontier(depth);
    Ok(jobs
        .into_par_iter()
        .map(|(mut s, start)| {
            let mut n = 0u64;
            s.run(start, &mut |_| n += 1);
            n
        })
        .sum())
}

/// [`enumerate`] with the subtrees searched in parallel; output is identical.
pub fn enumerate_parallel(b: &BoundaryCondition, depth: usize) -> Result<Vec<ColorMap>> {
    let lattice = Lattice::shared(b.n())?;
    let table = CompletionTable::new();
    let Some(root) = Search::new(&lattice, &table, b) else {
        return Ok(Vec::new());
    };
    let jobs = root.frontier(depth);
    let parts: Vec<Vec<ColorMap>> = jobs
        .into_par_iter()
        .map(|(mut s, start)| {
            let mut v = Vec::new();
            s.run(start, &mut |codes: &[u8]| {
                let colors = codes.iter().map(|&c| color_of(c)).collect();
                v.push(ColorMap::from_parts(Arc::clone(&lattice), colors));
            });
            v
        })
        .collect();
    let mut out: Vec<ColorMap> = parts.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Brute-force oracle: every coloring of the interior edges, filtered by validity.
pub fn naive_filter(b: &BoundaryCondition) -> Result<Vec<ColorMap>> {
    let n = b.n();
    if n > NAIVE_GUARD {
        return Err(Error::Guard {
            n,
            guard: NAIVE_GUARD,
        });
    }
    let lattice = Lattice::shared(n)?;
    let mut base = vec![Color::Zero; lattice.num_edges()];
    for l in 0..3u8 {
        for (i, &bit) in lattice.side(l).zip(b.side(l)) {
            base[i] = color_of(bit);
        }
    }
    let interior: Vec<usize> = (0..lattice.num_edges())
        .filter(|&i| !lattice.is_boundary(i))
        .collect();
    let faces: Vec<[usize; 3]> = (0..lattice.faces().len())
        .map(|f| lattice.face_edge_indices(f))
        .collect();
    let total = 4u64.pow(interior.len() as u32);
    let mut colors = base;
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        for &i in &interior {
            colors[i] = color_of((c % 4) as u8);
            c /= 4;
        }
        if faces
            .iter()
            .all(|f| crate::colormap::face_ok(colors[f[0]], colors[f[1]], colors[f[2]]))
        {
            out.push(ColorMap::from_parts(Arc::clone(&lattice), colors.clone()));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_boundary_has_one_map() {
        for n in 1..=4 {
            let maps = enumerate(&BoundaryCondition::zeros(n)).unwrap();
            assert_eq!(maps, vec![ColorMap::uniform(n, Color::Zero).unwrap()]);
            assert_eq!(count(&BoundaryCondition::zeros(n)).unwrap(), 1);
        }
    }

    #[test]
    fn unsatisfiable_boundaries_are_empty() {
        let b = BoundaryCondition::from_strs("01", "01", "01").unwrap();
        assert!(enumerate(&b).unwrap().is_empty());
        assert_eq!(count(&b).unwrap(), 0);
        assert!(naive_filter(&b).unwrap().is_empty());
        let b = BoundaryCondition::from_strs("10", "10", "10").unwrap();
        assert!(naive_filter(&b).unwrap().is_empty());
        assert!(enumerate(&b).unwrap().is_empty());
    }

    #[test]
    fn matches_naive_oracle_small() {
        for n in 1..=2 {
            for b in BoundaryCondition::all(n) {
                assert_eq!(enumerate(&b).unwrap(), naive_filter(&b).unwrap(), "{b}");
            }
        }
        let total_naive: usize = BoundaryCondition::all_with(2, 1)
            .iter()
            .map(|b| naive_filter(b).unwrap().len())
            .sum();
        let total: u64 = BoundaryCondition::all_with(2, 1)
            .iter()
            .map(|b| count(b).unwrap())
            .sum();
        assert_eq!(total, total_naive as u64);
    }

    #[test]
    fn naive_guard() {
        assert!(matches!(
            naive_filter(&BoundaryCondition::zeros(4)),
            Err(Error::Guard { n: 4, guard: 3 })
        ));
    }

    #[test]
    fn parallel_agrees() {
        let b = BoundaryCondition::from_strs("10110", "11001", "01011").unwrap();
        let serial = enumerate(&b).unwrap();
        for depth in [0, 1, 3, 6] {
            assert_eq!(enumerate_parallel(&b, depth).unwrap(), serial);
            assert_eq!(count_parallel(&b, depth).unwrap(), serial.len() as u64);
        }
    }
}
