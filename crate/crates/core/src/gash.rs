//! Gashes: a pair of aligned edges across which the line colors 0 and 1 are
//! swapped. Faces behind a gash see its new colors, faces ahead the
//! original ones. Propagating the gash through the map and then removing it
//! (or pushing it out through side 1) lowers `G(C,2)` by one.

use std::fmt;

use serde::Serialize;

use crate::colormap::{Color, ColorMap};
use crate::error::{Error, Result};
use crate::lattice::{Dir, FaceId, Vertex};
use crate::transforms::reverse_arrow_at;

use Color::{One as C1, Three as C3, Zero as C0, M};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// The stored map still holds the original colors on the gash edges.
    Original,
    /// The new colors have been written.
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Gash {
    pub center: Vertex,
    /// 1 or 2.
    pub gash_type: u8,
    pub phase: Phase,
}

impl Gash {
    pub fn new(center: Vertex, gash_type: u8) -> Result<Gash> {
        if !(1..=2).contains(&gash_type) {
            return Err(Error::Precondition(format!(
                "gash type must be 1 or 2, got {gash_type}"
            )));
        }
        Ok(Gash {
            center,
            gash_type,
            phase: Phase::Original,
        })
    }

    fn frame(&self) -> Frame {
        Frame {
            origin: self.center,
            turns: if self.gash_type == 2 { 0 } else { 1 },
        }
    }

    /// The (lower, upper) gash edges as vertex pairs. Original colors are
    /// (1, 0), new colors (0, 1).
    pub fn edges(&self) -> [(Vertex, Vertex); 2] {
        let f = self.frame();
        [(f.at(D), f.at(O)), (f.at(O), f.at(U))]
    }
}

/// Local coordinates around a gash center. A type-2 gash is vertical
/// (`turns = 0`); a type-1 gash is the same picture turned by `π/3`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    origin: Vertex,
    turns: i32,
}

type Pt = (i32, i32);

const O: Pt = (0, 0);
const U: Pt = (0, 1);
const D: Pt = (0, -1);
const E: Pt = (1, 0);
const SE: Pt = (1, -1);
const SSE: Pt = (1, -2);
const NE: Pt = (1, 1);
const ESE: Pt = (2, -1);
const W: Pt = (-1, 0);
const NW: Pt = (-1, 1);

impl Frame {
    fn at(&self, (r, s): Pt) -> Vertex {
        let (r, s) = if self.turns == 0 { (r, s) } else { (-s, r + s) };
        Vertex::new(self.origin.r + r, self.origin.s + s)
    }

    fn dir(&self, d: Dir) -> Dir {
        d.rotate(self.turns)
    }
}

/// Classification of the colors around a gash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigKind {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "boundary1")]
    Boundary1,
}

impl ConfigKind {
    pub fn is_terminal(self) -> bool {
        matches!(self, ConfigKind::V | ConfigKind::VI | ConfigKind::Boundary1)
    }
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigKind::I => "i",
            ConfigKind::II => "ii",
            ConfigKind::III => "iii",
            ConfigKind::IV => "iv",
            ConfigKind::V => "v",
            ConfigKind::VI => "vi",
            ConfigKind::Boundary1 => "boundary1",
        })
    }
}

/// A local rewrite: colors it expects, colors it writes, where the gash goes.
struct Rule {
    kind: ConfigKind,
    expect: &'static [(Pt, Pt, Color)],
    write: &'static [(Pt, Pt, Color)],
    /// New center and type, or `None` for a removal.
    next: Option<(Pt, NextType)>,
}

#[derive(Clone, Copy)]
enum NextType {
    Same,
    Flip,
}

/// `a = {O,SE}` and `b = {O,E}` select the configuration; the rest are
/// consistency checks. Every rule writes the new gash colors on `{D,O}`
/// and `{O,U}`.
const RULES: [Rule; 5] = [
    Rule {
        kind: ConfigKind::I,
        expect: &[
            (O, SE, C0),
            (O, E, C0),
            (D, SE, C3),
            (U, E, C0),
            (SE, E, C0),
            (SSE, SE, C1),
            (D, SSE, C0),
        ],
        write: &[(D, O, C0), (O, U, C1), (O, E, C3), (D, SE, C0)],
        next: Some((SE, NextType::Same)),
    },
    Rule {
        kind: ConfigKind::II,
        expect: &[
            (O, SE, C1),
            (O, E, C1),
            (D, SE, C1),
            (U, E, C3),
            (SE, E, C1),
            (E, NE, C0),
            (U, NE, C1),
        ],
        write: &[(D, O, C0), (O, U, C1), (O, SE, C3), (U, E, C1)],
        next: Some((E, NextType::Same)),
    },
    Rule {
        kind: ConfigKind::III,
        expect: &[
            (O, SE, C1),
            (O, E, C0),
            (D, SE, C1),
            (U, E, C0),
            (SE, E, C3),
            (E, ESE, C1),
            (SE, ESE, C0),
        ],
        write: &[(D, O, C0), (O, U, C1), (O, SE, C3), (O, E, C1), (SE, E, C0)],
        next: Some((E, NextType::Flip)),
    },
    Rule {
        kind: ConfigKind::V,
        expect: &[(O, SE, C1), (O, E, M)],
        write: &[(D, O, C0), (O, U, C1), (O, E, C1), (O, SE, C3)],
        next: None,
    },
    Rule {
        kind: ConfigKind::VI,
        expect: &[(O, SE, M), (O, E, C0)],
        write: &[(D, O, C0), (O, U, C1), (O, E, C3), (O, SE, C0)],
        next: None,
    },
];

/// Configuration (iii) for a type-1 gash, in plain lattice offsets from the
/// center: it produces a type-2 gash at `x + 1` instead of the turned picture.
const TYPE1_III: Rule = Rule {
    kind: ConfigKind::III,
    expect: &[
        ((0, 0), (1, 0), C1),
        ((0, 0), (0, 1), C0),
        ((1, -1), (1, 0), C1),
        ((1, 0), (1, 1), C0),
        ((0, 1), (1, 0), C3),
        ((0, 1), (-1, 1), C0),
        ((1, 1), (0, 1), C1),
    ],
    write: &[
        ((-1, 1), (0, 0), C1),
        ((0, 0), (1, -1), C0),
        ((0, 0), (1, 0), C0),
        ((0, 0), (0, 1), C3),
        ((0, 1), (1, 0), C1),
    ],
    next: Some(((1, 0), NextType::Flip)),
};

/// A map carrying a gash whose original colors are still stored.
#[derive(Debug, Clone)]
pub struct GashedMap {
    pub map: ColorMap,
    pub gash: Gash,
    pub step_count: usize,
}

impl GashedMap {
    /// Checks that both gash edges exist and carry the original colors.
    pub fn new(map: ColorMap, gash: Gash) -> Result<GashedMap> {
        let g = GashedMap {
            map,
            gash,
            step_count: 0,
        };
        for ((p, q), want) in gash.edges().into_iter().zip([C1, C0]) {
            let got = g.color(p, q)?;
            if got != want {
                return Err(Error::Precondition(format!(
                    "gash edge {p}-{q} colored {got}, expected {want}"
                )));
            }
        }
        Ok(g)
    }

    fn color(&self, p: Vertex, q: Vertex) -> Result<Color> {
        self.map
            .lattice()
            .index_between(p, q)
            .map(|i| self.map.at(i))
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "no edge {p}-{q} near the gash at {}",
                    self.gash.center
                ))
            })
    }

    fn local(&self, frame: &Frame, p: Pt, q: Pt) -> Option<Color> {
        let lattice = self.map.lattice();
        lattice
            .index_between(frame.at(p), frame.at(q))
            .map(|i| self.map.at(i))
    }

    /// Faces behind the gash, which see its new colors.
    fn behind(&self) -> Vec<usize> {
        let f = self.gash.frame();
        let lattice = self.map.lattice();
        [[D, O, W], [O, U, NW]]
            .iter()
            .filter_map(|t| FaceId::from_vertices(t.map(|p| f.at(p))))
            .filter_map(|face| lattice.face_index(face))
            .collect()
    }

    /// Whether every face is admissible, reading the new colors on the gash
    /// edges for the faces behind it.
    pub fn consistent(&self) -> bool {
        let lattice = self.map.lattice();
        let behind = self.behind();
        let gash_edges: Vec<usize> = self
            .gash
            .edges()
            .iter()
            .filter_map(|&(p, q)| lattice.index_between(p, q))
            .collect();
        (0..lattice.faces().len()).all(|fi| {
            let idx = lattice.face_edge_indices(fi);
            let mut cs = idx.map(|i| self.map.at(i));
            if behind.contains(&fi) {
                for (k, i) in idx.iter().enumerate() {
                    if gash_edges.contains(i) {
                        cs[k] = cs[k].flip_line();
                    }
                }
            }
            crate::colormap::face_ok(cs[0], cs[1], cs[2])
        })
    }

    fn apply(&mut self, frame: &Frame, rule: &Rule) -> Result<()> {
        for &(p, q, want) in rule.expect {
            let got = self.local(frame, p, q);
            if got != Some(want) {
                return Err(Error::Internal(format!(
                    "configuration ({}) at {} expects {want} on {}-{}, found {}",
                    rule.kind,
                    self.gash.center,
                    frame.at(p),
                    frame.at(q),
                    got.map_or("nothing".to_string(), |c| c.to_string())
                )));
            }
        }
        let lattice = self.map.lattice().clone();
        for &(p, q, c) in rule.write {
            let i = lattice
                .index_between(frame.at(p), frame.at(q))
                .expect("checked above");
            self.map.colors_mut()[i] = c;
        }
        match rule.next {
            Some((p, t)) => {
                let gash_type = match t {
                    NextType::Same => self.gash.gash_type,
                    NextType::Flip => 3 - self.gash.gash_type,
                };
                self.gash = Gash::new(frame.at(p), gash_type)?;
            }
            None => self.gash.phase = Phase::New,
        }
        Ok(())
    }
}

/// Configuration adjacent to the gash.
pub fn classify(g: &GashedMap) -> Result<ConfigKind> {
    let x = g.gash.center;
    if g.gash.gash_type == 1 && x.coord(g.map.n(), 0) == 0 {
        return Ok(ConfigKind::Boundary1);
    }
    let f = g.gash.frame();
    let a = g.local(&f, O, SE);
    let b = g.local(&f, O, E);
    let kind = match (a, b) {
        (Some(C0), Some(C0)) => ConfigKind::I,
        (Some(C1), Some(C1)) => ConfigKind::II,
        (Some(C1), Some(C0)) => ConfigKind::III,
        (Some(C0), Some(C1)) => ConfigKind::IV,
        (Some(C1), Some(M)) => ConfigKind::V,
        (Some(M), Some(C0)) => ConfigKind::VI,
        _ => {
            return Err(Error::Internal(format!(
                "no configuration matches the type-{} gash at {x} (a = {a:?}, b = {b:?})",
                g.gash.gash_type
            )))
        }
    };
    Ok(kind)
}

/// One propagation step through (i)-(iv).
pub fn propagate_step(g: &GashedMap) -> Result<GashedMap> {
    let kind = classify(g)?;
    let mut next = g.clone();
    let frame = g.gash.frame();
    match kind {
        ConfigKind::I => next.apply(&frame, &RULES[0])?,
        ConfigKind::II => next.apply(&frame, &RULES[1])?,
        ConfigKind::III if g.gash.gash_type == 1 => next.apply(
            &Frame {
                origin: g.gash.center,
                turns: 0,
            },
            &TYPE1_III,
        )?,
        ConfigKind::III => next.apply(&frame, &RULES[2])?,
        ConfigKind::IV => {
            let (reversed, _) = reverse_arrow_at(&g.map, g.gash.center, frame.dir(Dir::E), C0)?
                .ok_or_else(|| {
                    Error::Internal(format!("no 0 opening at the gash center {}", g.gash.center))
                })?;
            next.map = reversed;
            if classify(&next)? != ConfigKind::I {
                return Err(Error::Internal(format!(
                    "arrow reversal at {} did not give (i)",
                    g.gash.center
                )));
            }
            next.apply(&frame, &RULES[0])?;
        }
        terminal => {
            return Err(Error::Precondition(format!(
                "cannot propagate through configuration ({terminal})"
            )))
        }
    }
    next.step_count += 1;
    if !next.consistent() {
        return Err(Error::Internal(format!(
            "step ({kind}) from {} broke a face",
            g.gash.center
        )));
    }
    Ok(next)
}

/// One line of a propagation trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GashTraceStep {
    pub step_index: usize,
    pub kind: ConfigKind,
    pub center: Vertex,
    pub gash_type: u8,
    /// Number of m and 3 edges in the stored map before the step.
    pub m_count: usize,
    pub three_count: usize,
}

impl fmt::Display for GashTraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.step_index, self.kind, self.center.r, self.center.s, self.gash_type
        )
    }
}

/// Largest number of steps a propagation may take on `T_n`.
pub fn step_bound(n: usize) -> usize {
    (n + 1) * (n + 1)
}

/// Propagate until the gash reaches (v), (vi) or side 1.
pub fn propagate(c: &ColorMap, g: Gash) -> Result<(GashedMap, ConfigKind, Vec<GashTraceStep>)> {
    let mut gm = GashedMap::new(c.clone(), g)?;
    if !gm.consistent() {
        return Err(Error::Precondition(format!(
            "faces around the gash at {} are not consistent",
            g.center
        )));
    }
    let bound = step_bound(c.n());
    let mut trace = Vec::new();
    loop {
        let kind = classify(&gm)?;
        trace.push(GashTraceStep {
            step_index: gm.step_count,
            kind,
            center: gm.gash.center,
            gash_type: gm.gash.gash_type,
            m_count: gm.map.count_color(M),
            three_count: gm.map.count_color(C3),
        });
        if kind.is_terminal() {
            return Ok((gm, kind, trace));
        }
        if gm.step_count >= bound {
            return Err(Error::Internal(format!(
                "propagation exceeded {bound} steps"
            )));
        }
        gm = propagate_step(&gm)?;
    }
}

/// Replace the gash in (v) or (vi) by its new colors and fix the two edges
/// ahead of it.
pub fn remove_gash(g: &GashedMap) -> Result<ColorMap> {
    let rule = match classify(g)? {
        ConfigKind::V => &RULES[3],
        ConfigKind::VI => &RULES[4],
        other => {
            return Err(Error::Precondition(format!(
                "gash removal needs (v) or (vi), got ({other})"
            )))
        }
    };
    let mut gm = g.clone();
    gm.apply(&g.gash.frame(), rule)?;
    if !gm.map.validate() {
        return Err(Error::Internal(format!(
            "removal at {} left an invalid map",
            g.gash.center
        )));
    }
    Ok(gm.map)
}

/// Write the new colors of a gash lying on side 1.
fn exit_side1(g: &GashedMap) -> Result<ColorMap> {
    let mut map = g.map.clone();
    let lattice = map.lattice().clone();
    for ((p, q), c) in g.gash.edges().into_iter().zip([C0, C1]) {
        let i = lattice.index_between(p, q).expect("gash edge");
        map.colors_mut()[i] = c;
    }
    if !map.validate() {
        return Err(Error::Internal(format!(
            "side-1 exit at {} left an invalid map",
            g.gash.center
        )));
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecrementCase {
    Removal,
    Boundary,
}

impl fmt::Display for DecrementCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecrementCase::Removal => "removal",
            DecrementCase::Boundary => "boundary",
        })
    }
}

/// Result of [`decrement_g2`].
#[derive(Debug, Clone)]
pub struct Decrement {
    pub map: ColorMap,
    pub case: DecrementCase,
    pub steps: usize,
    pub trace: Vec<GashTraceStep>,
}

/// The lowest side-2 pair reading 1 then 0 upward, as a type-2 gash.
pub fn starting_gash(c: &ColorMap) -> Result<Gash> {
    let side = c.side_colors(2);
    let h = side
        .windows(2)
        .position(|w| w == [C1, C0])
        .ok_or_else(|| Error::Precondition("G(C,2) = 0, no gash to start".into()))?;
    Gash::new(Vertex::new(0, h as i32 + 1), 2)
}

/// Lower `G(C,2)` by one: cut a gash on side 2, propagate it, then remove it
/// or push it out through side 1.
pub fn decrement_g2(c: &ColorMap) -> Result<Decrement> {
    if !c.validate() {
        return Err(Error::InvalidMap("decrement_g2 needs a valid map".into()));
    }
    let g = starting_gash(c)?;
    let (gm, kind, trace) = propagate(c, g)?;
    let (map, case) = match kind {
        ConfigKind::Boundary1 => (exit_side1(&gm)?, DecrementCase::Boundary),
        _ => (remove_gash(&gm)?, DecrementCase::Removal),
    };
    check_decrement(c, &map, case)?;
    Ok(Decrement {
        map,
        case,
        steps: gm.step_count,
        trace,
    })
}

fn check_decrement(before: &ColorMap, after: &ColorMap, case: DecrementCase) -> Result<()> {
    let fail = |what: &str| Err(Error::Internal(format!("decrement ({case}): {what}")));
    if after.gash_number(2) + 1 != before.gash_number(2) {
        return fail("G(C,2) did not drop by one");
    }
    if after.side_colors(0) != before.side_colors(0) {
        return fail("side 0 changed");
    }
    let (m0, s0) = (before.count_color(M) as i64, before.count_color(C3) as i64);
    let (m1, s1) = (after.count_color(M) as i64, after.count_color(C3) as i64);
    let g1 = after.gash_number(1) as i64 - before.gash_number(1) as i64;
    let expected = match case {
        DecrementCase::Removal => (0, -1, 1),
        DecrementCase::Boundary => (1, 0, 0),
    };
    if (g1, m1 - m0, s1 - s0) != expected {
        return fail(&format!(
            "deltas (G1, m, 3) = ({g1}, {}, {})",
            m1 - m0,
            s1 - s0
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colormap::BoundaryCondition;
    use crate::enumerate::{enumerate, for_each_map};
    use crate::transforms::reverse_arrow_at;

    fn gashed_maps(n: usize) -> Vec<ColorMap> {
        let mut out = Vec::new();
        for b in BoundaryCondition::all(n) {
            for_each_map(&b, |c| {
                if c.gash_number(2) > 0 {
                    out.push(c)
                }
            })
            .unwrap();
        }
        out
    }

    /// Every gashed map met while propagating from side 2, at each step.
    fn states(n: usize) -> Vec<GashedMap> {
        let mut out = Vec::new();
        for c in gashed_maps(n) {
            let mut gm = GashedMap::new(c.clone(), starting_gash(&c).unwrap()).unwrap();
            loop {
                out.push(gm.clone());
                if classify(&gm).unwrap().is_terminal() {
                    break;
                }
                gm = propagate_step(&gm).unwrap();
            }
        }
        out
    }

    #[test]
    fn gash_construction() {
        assert!(Gash::new(Vertex::new(0, 1), 0).is_err());
        assert!(Gash::new(Vertex::new(0, 1), 3).is_err());
        let g = Gash::new(Vertex::new(0, 1), 2).unwrap();
        assert_eq!(
            g.edges(),
            [
                (Vertex::new(0, 0), Vertex::new(0, 1)),
                (Vertex::new(0, 1), Vertex::new(0, 2))
            ]
        );
        let g = Gash::new(Vertex::new(1, 1), 1).unwrap();
        assert_eq!(
            g.edges(),
            [
                (Vertex::new(2, 0), Vertex::new(1, 1)),
                (Vertex::new(1, 1), Vertex::new(0, 2))
            ]
        );
        // Original colors must be present.
        let z = ColorMap::uniform(3, Color::Zero).unwrap();
        assert!(GashedMap::new(z, Gash::new(Vertex::new(0, 1), 2).unwrap()).is_err());
    }

    #[test]
    fn starting_pair_is_lowest() {
        let b = BoundaryCondition::from_strs("10110", "11001", "01011").unwrap();
        let c = enumerate(&b).unwrap().remove(0);
        // Side 2 upward: 0 1 0 1 1; the only "1 then 0" sits at heights 1, 2.
        assert_eq!(starting_gash(&c).unwrap().center, Vertex::new(0, 2));
        assert!(starting_gash(&ColorMap::uniform(3, Color::Zero).unwrap()).is_err());
        assert!(decrement_g2(&ColorMap::uniform(3, Color::One).unwrap()).is_err());
    }

    #[test]
    fn every_configuration_occurs_and_classifies() {
        let mut seen = std::collections::BTreeMap::new();
        for gm in states(4) {
            let kind = classify(&gm).unwrap();
            assert!(gm.consistent());
            assert!(matches!(gm.gash.gash_type, 1 | 2));
            if kind == ConfigKind::Boundary1 {
                assert_eq!(gm.gash.gash_type, 1);
            }
            seen.entry((kind, gm.gash.gash_type)).or_insert(gm);
        }
        for kind in [
            ConfigKind::I,
            ConfigKind::II,
            ConfigKind::III,
            ConfigKind::IV,
            ConfigKind::V,
            ConfigKind::VI,
        ] {
            for t in [1, 2] {
                assert!(seen.contains_key(&(kind, t)), "({kind}) type {t} never met");
            }
        }
        assert!(seen.contains_key(&(ConfigKind::Boundary1, 1)));
    }

    #[test]
    fn steps_make_progress() {
        for gm in states(4) {
            let kind = classify(&gm).unwrap();
            if kind.is_terminal() {
                assert!(matches!(propagate_step(&gm), Err(Error::Precondition(_))));
                continue;
            }
            assert!(matches!(remove_gash(&gm), Err(Error::Precondition(_))));
            let next = propagate_step(&gm).unwrap();
            assert_eq!(next.step_count, gm.step_count + 1);
            let n = gm.map.n();
            let (a, b) = (gm.gash.center, next.gash.center);
            assert!(b.coord(n, 0) < a.coord(n, 0) || b.coord(n, 1) > a.coord(n, 1));
            match kind {
                ConfigKind::III => assert_ne!(next.gash.gash_type, gm.gash.gash_type),
                _ => assert_eq!(next.gash.gash_type, gm.gash.gash_type),
            }
            assert_eq!(next.map.side_colors(0), gm.map.side_colors(0));
        }
    }

    #[test]
    fn configuration_iv_is_reversal_then_i() {
        let mut checked = 0;
        for gm in states(4) {
            if classify(&gm).unwrap() != ConfigKind::IV {
                continue;
            }
            checked += 1;
            let dir = gm.gash.frame().dir(Dir::E);
            let (rev, len) = reverse_arrow_at(&gm.map, gm.gash.center, dir, Color::Zero)
                .unwrap()
                .unwrap();
            assert!(len >= 1);
            let mid = GashedMap {
                map: rev,
                ..gm.clone()
            };
            assert_eq!(classify(&mid).unwrap(), ConfigKind::I);
            let via_i = propagate_step(&mid).unwrap();
            let direct = propagate_step(&gm).unwrap();
            assert_eq!(via_i.map, direct.map);
            assert_eq!(via_i.gash, direct.gash);
        }
        assert!(checked > 0);
    }

    #[test]
    fn decrement_deltas_and_iteration() {
        for n in 1..=4 {
            for c in gashed_maps(n) {
                let d = decrement_g2(&c).unwrap();
                assert!(d.map.validate());
                assert!(d.steps <= step_bound(n));
                assert_eq!(d.map.gash_number(2) + 1, c.gash_number(2));
                assert_eq!(d.map.gash_number(0), c.gash_number(0));
                let dm = d.map.count_color(M) as i64 - c.count_color(M) as i64;
                let ds = d.map.count_color(C3) as i64 - c.count_color(C3) as i64;
                let dg1 = d.map.gash_number(1) as i64 - c.gash_number(1) as i64;
                match d.case {
                    DecrementCase::Removal => assert_eq!((dg1, dm, ds), (0, -1, 1)),
                    DecrementCase::Boundary => assert_eq!((dg1, dm, ds), (1, 0, 0)),
                }
                let mut cur = c.clone();
                while cur.gash_number(2) > 0 {
                    cur = decrement_g2(&cur).unwrap().map;
                }
                assert_eq!(cur.side_colors(0), c.side_colors(0));
            }
        }
    }

    #[test]
    fn steps_keep_lozenge_counts() {
        for c in gashed_maps(4) {
            let d = decrement_g2(&c).unwrap();
            for t in &d.trace {
                assert_eq!(
                    (t.m_count, t.three_count),
                    (c.count_color(M), c.count_color(C3))
                );
            }
        }
    }

    #[test]
    fn trace_format() {
        let b = BoundaryCondition::from_strs("10110", "11001", "01011").unwrap();
        let c = enumerate(&b).unwrap().remove(0);
        let d = decrement_g2(&c).unwrap();
        assert_eq!(d.trace.len(), d.steps + 1);
        let first = d.trace[0].to_string();
        assert!(first.starts_with("(0, "), "{first}");
        assert!(first.ends_with(", 0, 2, 2)"), "{first}");
        for (i, t) in d.trace.iter().enumerate() {
            assert_eq!(t.step_index, i);
        }
        assert!(d.trace.last().unwrap().kind.is_terminal());
    }
}
