use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use trilat_core::colormap::predict_puzzle_counts;
use trilat_core::gash::{step_bound, GashTraceStep};
use trilat_core::paths::lgv_matrix;
use trilat_core::transforms::TraceStep;
use trilat_core::{
    decrement_g2, enumerate, enumerate_parallel, extract_paths, is_reduced, lgv_count,
    predict_counts, reduce, render_svg, string_g, BoundaryCondition, Color, ColorMap,
    DecrementCase,
};

use crate::report::{render, Format};
use crate::{BoundaryArgs, Command, Corner, Failure};

/// Branch depth at which enumeration splits across workers.
const SPLIT_DEPTH: usize = 6;
/// Violations listed in a verify report; the total is always given.
const SHOWN_VIOLATIONS: usize = 10;

type Outcome = Result<u8, Failure>;

pub fn run(cmd: Command, format: Format) -> Outcome {
    match cmd {
        Command::Predict { u, v, w } => predict(&u, &v, &w, format),
        Command::Enumerate {
            boundary,
            out,
            maps,
        } => enumerate_cmd(&boundary, out.as_deref(), maps, format),
        Command::Verify {
            n,
            guard,
            inject_fault,
        } => verify(n, guard, inject_fault, format),
        Command::Reduce { map, trace, out } => reduce_cmd(&map, trace, out.as_deref(), format),
        Command::Decrement { map, trace, out } => {
            decrement_cmd(&map, trace, out.as_deref(), format)
        }
        Command::Lgv {
            side1,
            check,
            guard,
        } => lgv(&side1, check, guard, format),
        Command::Render { map, out } => render_cmd(&map, out.as_deref(), format),
    }
}

fn emit<T: Serialize>(report: &T, format: Format) {
    print!("{}", render(report, format));
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_map(path: &Path) -> Result<ColorMap, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    ColorMap::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_valid_map(path: &Path) -> Result<ColorMap, Failure> {
    let c = read_map(path)?;
    let bad = c.invalid_faces();
    if !bad.is_empty() {
        return Err(usage(format!(
            "{}: {} faces break the color rules",
            path.display(),
            bad.len()
        )));
    }
    Ok(c)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn gash_numbers(c: &ColorMap) -> [u64; 3] {
    [c.gash_number(0), c.gash_number(1), c.gash_number(2)]
}

/// Side strings in side-index order from the `--boundary` flags.
pub fn boundary_from_args(args: &BoundaryArgs) -> Result<BoundaryCondition, Failure> {
    let [a, b, c] = args.boundary.as_slice() else {
        return Err(usage(format!(
            "--boundary needs three strings, got {}",
            args.boundary.len()
        )));
    };
    let sides = match args.clockwise_from {
        None => [a, b, c],
        Some(Corner::BottomLeft) => [c, b, a],
        Some(Corner::Apex) => [b, a, c],
        Some(Corner::BottomRight) => [a, c, b],
    };
    let bc = BoundaryCondition::from_strs(sides[0], sides[1], sides[2])?;
    if let Some(n) = args.n {
        if n != bc.n() {
            return Err(usage(format!(
                "--n {n} does not match boundary strings of length {}",
                bc.n()
            )));
        }
    }
    Ok(bc)
}

#[derive(Serialize)]
struct PredictReport {
    g_u: u64,
    g_v: u64,
    g_w: u64,
    n0: usize,
    n1: usize,
    n7: i64,
    nsc: i64,
    warning: Option<String>,
}

fn predict(u: &str, v: &str, w: &str, format: Format) -> Outcome {
    let (n7, nsc) = predict_puzzle_counts(u, v, w)?;
    let warning = (n7 < 0 || nsc < 0)
        .then(|| "negative prediction: no puzzle or color map has this boundary".to_string());
    if let Some(msg) = &warning {
        eprintln!("warning: {msg}");
    }
    emit(
        &PredictReport {
            g_u: string_g(u)?,
            g_v: string_g(v)?,
            g_w: string_g(w)?,
            n0: u.chars().filter(|&c| c == '0').count(),
            n1: u.chars().filter(|&c| c == '1').count(),
            n7,
            nsc,
            warning,
        },
        format,
    );
    Ok(0)
}

#[derive(Serialize)]
struct EnumerateReport {
    boundary: [String; 3],
    n: usize,
    n0: usize,
    n1: usize,
    g: [u64; 3],
    predicted_m: i64,
    predicted_3: i64,
    count: usize,
    all_match_prediction: bool,
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maps: Option<Vec<String>>,
}

fn enumerate_cmd(args: &BoundaryArgs, out: Option<&Path>, list: bool, format: Format) -> Outcome {
    let b = boundary_from_args(args)?;
    let maps = enumerate_parallel(&b, SPLIT_DEPTH)?;
    let (pm, ps) = predict_counts(&b);
    let all_match = maps
        .iter()
        .all(|c| c.count_color(Color::M) as i64 == pm && c.count_color(Color::Three) as i64 == ps);
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        for (i, c) in maps.iter().enumerate() {
            write_file(&dir.join(format!("map_{i:05}.txt")), &c.to_text())?;
        }
    }
    emit(
        &EnumerateReport {
            boundary: [b.side_string(0), b.side_string(1), b.side_string(2)],
            n: b.n(),
            n0: b.n0(),
            n1: b.n1(),
            g: [b.gash_number(0), b.gash_number(1), b.gash_number(2)],
            predicted_m: pm,
            predicted_3: ps,
            count: maps.len(),
            all_match_prediction: all_match,
            out: out.map(|p| p.display().to_string()),
            maps: list.then(|| maps.iter().map(ColorMap::to_text).collect()),
        },
        format,
    );
    Ok(if all_match { 0 } else { 1 })
}

#[derive(Serialize)]
struct VerifyReport {
    n_max: usize,
    boundaries: usize,
    maps: usize,
    maps_by_n: Vec<usize>,
    violations: usize,
    first_violations: Vec<String>,
    elapsed_ms: u128,
}

/// Everything a single map must satisfy; `None` when it does.
fn map_violation(b: &BoundaryCondition, c: &ColorMap) -> Option<String> {
    if !c.validate() {
        return Some(format!("{b}: map breaks the face rules"));
    }
    if c.boundary().ok().as_ref() != Some(b) {
        return Some(format!("{b}: map has a different boundary"));
    }
    let (pm, ps) = predict_counts(b);
    let (m, s) = (c.count_color(Color::M), c.count_color(Color::Three));
    if (m as i64, s as i64) != (pm, ps) {
        return Some(format!("{b}: (m, 3) = ({m}, {s}), predicted ({pm}, {ps})"));
    }
    if m + s != b.n0() * b.n1() {
        return Some(format!(
            "{b}: {} lozenges, budget {}",
            m + s,
            b.n0() * b.n1()
        ));
    }
    for (j, nj) in [(Color::Zero, b.n0()), (Color::One, b.n1())] {
        let want = (nj * (nj + 1) / 2, nj * nj.saturating_sub(1) / 2);
        let got = c.count_mono_faces(j);
        if got != want {
            return Some(format!("{b}: color {j} faces {got:?}, expected {want:?}"));
        }
    }
    None
}

fn corrupt(c: &ColorMap) -> ColorMap {
    let mut colors = c.colors().to_vec();
    let i = colors.len() / 2;
    colors[i] = match colors[i] {
        Color::Zero => Color::Three,
        _ => Color::Zero,
    };
    ColorMap::from_colors(c.n(), colors).expect("same size")
}

fn verify(n_max: usize, guard: usize, inject_fault: bool, format: Format) -> Outcome {
    if n_max == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if n_max > guard {
        return Err(trilat_core::Error::Guard { n: n_max, guard }.into());
    }
    let start = Instant::now();
    let boundaries: Vec<BoundaryCondition> = (1..=n_max).flat_map(BoundaryCondition::all).collect();
    let results: Vec<(usize, usize, Vec<String>)> = boundaries
        .par_iter()
        .enumerate()
        .map(|(k, b)| {
            let mut maps = enumerate(b)?;
            if inject_fault && k == 0 {
                maps[0] = corrupt(&maps[0]);
            }
            let bad: Vec<String> = maps.iter().filter_map(|c| map_violation(b, c)).collect();
            Ok((b.n(), maps.len(), bad))
        })
        .collect::<trilat_core::Result<_>>()?;
    let mut maps_by_n = vec![0; n_max];
    let mut violations = Vec::new();
    for (n, count, bad) in results {
        maps_by_n[n - 1] += count;
        violations.extend(bad);
    }
    let report = VerifyReport {
        n_max,
        boundaries: boundaries.len(),
        maps: maps_by_n.iter().sum(),
        maps_by_n,
        violations: violations.len(),
        first_violations: violations.iter().take(SHOWN_VIOLATIONS).cloned().collect(),
        elapsed_ms: start.elapsed().as_millis(),
    };
    emit(&report, format);
    Ok(if violations.is_empty() { 0 } else { 1 })
}

#[derive(Serialize)]
struct ReduceReport {
    n: usize,
    n0: usize,
    n1: usize,
    g: [u64; 3],
    exchanged: usize,
    predicted_exchanged: usize,
    m_before: usize,
    m_after: usize,
    three_before: usize,
    three_after: usize,
    side1_unchanged: bool,
    valid: bool,
    reduced: bool,
    moves: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceStep>>,
    paths: String,
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<String>,
}

fn reduce_cmd(path: &Path, trace: bool, out: Option<&Path>, format: Format) -> Outcome {
    let c = read_valid_map(path)?;
    let r = reduce(&c)?;
    let paths = extract_paths(&r.map)?;
    let predicted = c.n0() * c.n1() - c.gash_number(0) as usize;
    let report = ReduceReport {
        n: c.n(),
        n0: c.n0(),
        n1: c.n1(),
        g: gash_numbers(&c),
        exchanged: r.exchanged,
        predicted_exchanged: predicted,
        m_before: c.count_color(Color::M),
        m_after: r.map.count_color(Color::M),
        three_before: c.count_color(Color::Three),
        three_after: r.map.count_color(Color::Three),
        side1_unchanged: r.map.side_string(1) == c.side_string(1),
        valid: r.map.validate(),
        reduced: is_reduced(&r.map),
        moves: r.trace.len(),
        trace: trace.then(|| r.trace.clone()),
        paths: paths.to_text(),
        out: out.map(|p| p.display().to_string()),
        map: out.is_none().then(|| r.map.to_text()),
    };
    if let Some(p) = out {
        write_file(p, &r.map.to_text())?;
    }
    emit(&report, format);
    let ok = report.exchanged == predicted
        && report.m_after == report.m_before + predicted
        && report.three_after + predicted == report.three_before
        && report.side1_unchanged
        && report.valid
        && report.reduced;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct DecrementReport {
    n: usize,
    g_before: [u64; 3],
    g_after: [u64; 3],
    case: DecrementCase,
    steps: usize,
    step_bound: usize,
    m_before: usize,
    m_after: usize,
    three_before: usize,
    three_after: usize,
    /// Expected changes of (G1, m, 3) for this case.
    expected_deltas: [i64; 3],
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<GashTraceStep>>,
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<String>,
}

fn decrement_cmd(path: &Path, trace: bool, out: Option<&Path>, format: Format) -> Outcome {
    let c = read_valid_map(path)?;
    let d = decrement_g2(&c)?;
    let expected = match d.case {
        DecrementCase::Removal => [0, -1, 1],
        DecrementCase::Boundary => [1, 0, 0],
    };
    let report = DecrementReport {
        n: c.n(),
        g_before: gash_numbers(&c),
        g_after: gash_numbers(&d.map),
        case: d.case,
        steps: d.steps,
        step_bound: step_bound(c.n()),
        m_before: c.count_color(Color::M),
        m_after: d.map.count_color(Color::M),
        three_before: c.count_color(Color::Three),
        three_after: d.map.count_color(Color::Three),
        expected_deltas: expected,
        valid: d.map.validate(),
        trace: trace.then(|| d.trace.clone()),
        out: out.map(|p| p.display().to_string()),
        map: out.is_none().then(|| d.map.to_text()),
    };
    if let Some(p) = out {
        write_file(p, &d.map.to_text())?;
    }
    emit(&report, format);
    let delta = |a: usize, b: usize| a as i64 - b as i64;
    let got = [
        report.g_after[1] as i64 - report.g_before[1] as i64,
        delta(report.m_after, report.m_before),
        delta(report.three_after, report.three_before),
    ];
    let ok = got == expected
        && report.g_after[0] == report.g_before[0]
        && report.g_after[2] + 1 == report.g_before[2]
        && report.steps <= report.step_bound
        && report.valid;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct LgvReport {
    side1: String,
    n: usize,
    n0: usize,
    matrix: Vec<Vec<i64>>,
    determinant: i64,
    enumerated: Option<u64>,
    agrees: Option<bool>,
}

fn to_i64(x: i128) -> Result<i64, Failure> {
    i64::try_from(x).map_err(|_| Failure::Falsified(format!("{x} does not fit in 64 bits")))
}

/// Reduced maps whose side 1 reads `side1`, by enumerating every boundary
/// that shares it.
fn count_reduced(side1: &BoundaryCondition) -> trilat_core::Result<u64> {
    let n = side1.n();
    let s1 = side1.side_string(1);
    let per: Vec<u64> = BoundaryCondition::all_with(n, side1.n0())
        .into_par_iter()
        .filter(|b| b.side_string(1) == s1)
        .map(|b| Ok(enumerate(&b)?.iter().filter(|c| is_reduced(c)).count() as u64))
        .collect::<trilat_core::Result<_>>()?;
    Ok(per.iter().sum())
}

fn lgv(side1: &str, check: bool, guard: usize, format: Format) -> Outcome {
    let b = BoundaryCondition::from_strs(side1, side1, side1)?;
    let matrix = lgv_matrix(side1)?
        .into_iter()
        .map(|row| row.into_iter().map(to_i64).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let det = lgv_count(side1)?;
    let enumerated = if check {
        if b.n() > guard {
            return Err(trilat_core::Error::Guard { n: b.n(), guard }.into());
        }
        Some(count_reduced(&b)?)
    } else {
        None
    };
    let agrees = enumerated.map(|e| e as i128 == det);
    emit(
        &LgvReport {
            side1: side1.to_string(),
            n: b.n(),
            n0: b.n0(),
            matrix,
            determinant: to_i64(det)?,
            enumerated,
            agrees,
        },
        format,
    );
    Ok(if agrees == Some(false) { 1 } else { 0 })
}

#[derive(Serialize)]
struct RenderReport {
    out: String,
    edges: usize,
    bytes: usize,
}

fn render_cmd(path: &Path, out: Option<&Path>, format: Format) -> Outcome {
    let c = read_map(path)?;
    let svg = render_svg(&c);
    match out {
        None => print!("{svg}"),
        Some(p) => {
            write_file(p, &svg)?;
            let out = PathBuf::from(p).display().to_string();
            emit(
                &RenderReport {
                    out,
                    edges: c.colors().len(),
                    bytes: svg.len(),
                },
                format,
            );
        }
    }
    Ok(0)
}
