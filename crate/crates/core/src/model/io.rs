//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! [lp]
//! sense maximize
//! variables 2
//! objective 1 1
//! row 0 <= 10        # row index, sense, rhs
//! bound 1 0 inf      # optional, default [0, inf)
//! 0 0 1.5            # coefficient triple: row col value
//! 0 1 2
//! [bands]
//! band -1 0 1        # band id, lower count, upper count
//! band 0 0 2
//! band 1 0 1
//! override 0 1 0 2   # per-row replacement: row band lower upper
//! [deviations]
//! 0 0 -1 -0.2        # row col band value
//! 0 0 1 0.3
//! ```
//!
//! A row listed in `override` lines gets a profile made only of those lines.
//! The `0` breakpoint may be omitted; every other band of the row's profile
//! must be given. Sections not listed above are kept verbatim in
//! [`Instance::extra`].

use super::{BandProfile, LinearProgram, MultiBandUncertaintySet, RowSense, Sense};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub lp: LinearProgram,
    pub uncertainty: MultiBandUncertaintySet,
    /// Unrecognized sections, by name, as `(line number, text)` pairs.
    pub extra: BTreeMap<String, Vec<(usize, String)>>,
}

/// Profile with band 0 only: no uncertainty can be expressed.
pub fn nominal_only_profile(n: usize) -> BandProfile {
    BandProfile::new(vec![0], vec![0], vec![n])
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Lp,
    Bands,
    Deviations,
    Other,
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .or_else(|_| err(line, format!("cannot parse {what} from '{tok}'")))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut section = Section::None;
    let mut other_name = String::new();
    let mut extra: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();

    let mut sense = None;
    let mut nvars: Option<usize> = None;
    let mut objective: Option<(usize, Vec<f64>)> = None;
    let mut rows_decl: BTreeMap<usize, (usize, RowSense, f64)> = BTreeMap::new();
    let mut bounds: Vec<(usize, usize, f64, f64)> = Vec::new();
    let mut triples: Vec<(usize, usize, usize, f64)> = Vec::new();
    let mut bands: Vec<(usize, i32, usize, usize)> = Vec::new();
    let mut overrides: BTreeMap<usize, Vec<(usize, i32, usize, usize)>> = BTreeMap::new();
    let mut devs: Vec<(usize, usize, usize, i32, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            if !content.ends_with(']') {
                return err(ln, format!("malformed section header '{content}'"));
            }
            let name = &content[1..content.len() - 1];
            section = match name {
                "lp" => Section::Lp,
                "bands" => Section::Bands,
                "deviations" => Section::Deviations,
                _ => {
                    other_name = name.to_string();
                    extra.entry(other_name.clone()).or_default();
                    Section::Other
                }
            };
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::None => return err(ln, "content before the first section header"),
            Section::Other => extra
                .get_mut(&other_name)
                .expect("section registered")
                .push((ln, content.to_string())),
            Section::Lp => match toks[0] {
                "sense" => {
                    if toks.len() != 2 {
                        return err(ln, "expected 'sense maximize|minimize'");
                    }
                    sense = Some(match toks[1] {
                        "maximize" | "max" => Sense::Maximize,
                        "minimize" | "min" => Sense::Minimize,
                        s => return err(ln, format!("unknown objective sense '{s}'")),
                    });
                }
                "variables" => {
                    if toks.len() != 2 {
                        return err(ln, "expected 'variables <count>'");
                    }
                    nvars = Some(num(toks[1], ln, "variable count")?);
                }
                "objective" => {
                    let vals = toks[1..]
                        .iter()
                        .map(|t| num(t, ln, "objective coefficient"))
                        .collect::<Result<Vec<f64>, _>>()?;
                    objective = Some((ln, vals));
                }
                "row" => {
                    if toks.len() != 4 {
                        return err(ln, "expected 'row <index> <=|>=|= <rhs>'");
                    }
                    let i: usize = num(toks[1], ln, "row index")?;
                    let s = match toks[2] {
                        "<=" => RowSense::Le,
                        ">=" => RowSense::Ge,
                        "=" | "==" => RowSense::Eq,
                        s => return err(ln, format!("unknown row sense '{s}'")),
                    };
                    let b: f64 = num(toks[3], ln, "rhs")?;
                    if rows_decl.insert(i, (ln, s, b)).is_some() {
                        return err(ln, format!("row {i} declared twice"));
                    }
                }
                "bound" => {
                    if toks.len() != 4 {
                        return err(ln, "expected 'bound <col> <lower> <upper>'");
                    }
                    bounds.push((
                        ln,
                        num(toks[1], ln, "column index")?,
                        num(toks[2], ln, "lower bound")?,
                        num(toks[3], ln, "upper bound")?,
                    ));
                }
                _ => {
                    if toks.len() != 3 {
                        return err(ln, format!("unrecognized [lp] line '{content}'"));
                    }
                    triples.push((
                        ln,
                        num(toks[0], ln, "row index")?,
                        num(toks[1], ln, "column index")?,
                        num(toks[2], ln, "coefficient")?,
                    ));
                }
            },
            Section::Bands => match toks[0] {
                "band" if toks.len() == 4 => bands.push((
                    ln,
                    num(toks[1], ln, "band id")?,
                    num(toks[2], ln, "lower count")?,
                    num(toks[3], ln, "upper count")?,
                )),
                "override" if toks.len() == 5 => {
                    let i: usize = num(toks[1], ln, "row index")?;
                    overrides.entry(i).or_default().push((
                        ln,
                        num(toks[2], ln, "band id")?,
                        num(toks[3], ln, "lower count")?,
                        num(toks[4], ln, "upper count")?,
                    ));
                }
                _ => return err(ln, format!("unrecognized [bands] line '{content}'")),
            },
            Section::Deviations => {
                if toks.len() != 4 {
                    return err(ln, "expected '<row> <col> <band> <value>'");
                }
                devs.push((
                    ln,
                    num(toks[0], ln, "row index")?,
                    num(toks[1], ln, "column index")?,
                    num(toks[2], ln, "band id")?,
                    num(toks[3], ln, "deviation")?,
                ));
            }
        }
    }

    let sense = sense.ok_or_else(|| ParseError {
        line: 0,
        message: "missing 'sense' in [lp]".into(),
    })?;
    let n = nvars.ok_or_else(|| ParseError {
        line: 0,
        message: "missing 'variables' in [lp]".into(),
    })?;
    let objective = match objective {
        Some((ln, v)) if v.len() != n => {
            return err(
                ln,
                format!("objective has {} entries, expected {n}", v.len()),
            )
        }
        Some((_, v)) => v,
        None => vec![0.0; n],
    };
    let m = rows_decl.keys().next_back().map_or(0, |&i| i + 1);
    if rows_decl.len() != m {
        let missing = (0..m).find(|i| !rows_decl.contains_key(i)).unwrap_or(0);
        return err(0, format!("row {missing} is never declared"));
    }

    let mut lp = LinearProgram::new(sense, objective);
    for &(_, s, b) in rows_decl.values() {
        lp.add_row(Vec::new(), s, b);
    }
    for (ln, j, lo, hi) in bounds {
        if j >= n {
            return err(ln, format!("bound for column {j} out of range"));
        }
        lp.var_lower[j] = lo;
        lp.var_upper[j] = hi;
    }
    for (ln, i, j, a) in triples {
        if i >= m {
            return err(ln, format!("coefficient references undeclared row {i}"));
        }
        if j >= n {
            return err(
                ln,
                format!("coefficient references column {j} out of range"),
            );
        }
        if lp.rows[i].iter().any(|&(c, _)| c == j) {
            return err(ln, format!("coefficient ({i}, {j}) given twice"));
        }
        lp.rows[i].push((j, a));
    }

    let profile = if bands.is_empty() {
        nominal_only_profile(n)
    } else {
        build_profile(&bands)?
    };
    let mut u = MultiBandUncertaintySet::new(profile);
    for (i, lines) in &overrides {
        u.set_row_profile(*i, build_profile(lines)?);
    }

    // (line, band, value) per coefficient
    type Lines = Vec<(usize, i32, f64)>;
    let mut grouped: BTreeMap<(usize, usize), Lines> = BTreeMap::new();
    for (ln, i, j, k, v) in devs {
        grouped.entry((i, j)).or_default().push((ln, k, v));
    }
    for ((i, j), entries) in grouped {
        let profile = u.profile_for(i).clone();
        let mut d = vec![None; profile.num_bands()];
        for (ln, k, v) in &entries {
            let Some(p) = profile.position(*k) else {
                return err(*ln, format!("band {k} is not in the profile of row {i}"));
            };
            if d[p].replace(*v).is_some() {
                return err(*ln, format!("deviation ({i}, {j}, {k}) given twice"));
            }
        }
        let first_line = entries[0].0;
        let mut full = Vec::with_capacity(d.len());
        for (p, v) in d.into_iter().enumerate() {
            match (v, profile.band_ids[p]) {
                (Some(v), _) => full.push(v),
                (None, 0) => full.push(0.0),
                (None, k) => {
                    return err(first_line, format!("coefficient ({i}, {j}) lacks band {k}"))
                }
            }
        }
        u.insert(i, j, full);
    }

    Ok(Instance {
        lp,
        uncertainty: u,
        extra,
    })
}

fn build_profile(lines: &[(usize, i32, usize, usize)]) -> Result<BandProfile, ParseError> {
    let mut sorted = lines.to_vec();
    sorted.sort_by_key(|&(_, k, _, _)| k);
    for w in sorted.windows(2) {
        if w[0].1 == w[1].1 {
            return err(w[1].0, format!("band {} declared twice", w[1].1));
        }
    }
    Ok(BandProfile::new(
        sorted.iter().map(|b| b.1).collect(),
        sorted.iter().map(|b| b.2).collect(),
        sorted.iter().map(|b| b.3).collect(),
    ))
}

/// Shortest representation that parses back to the same value.
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.fract() == 0.0 && self.0.abs() < 1e15 {
            write!(f, "{}", self.0 as i64)
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// Writes the `[lp]` section.
pub fn write_lp(out: &mut String, lp: &LinearProgram) {
    let _ = writeln!(out, "[lp]");
    let _ = writeln!(out, "sense {}", lp.sense);
    let _ = writeln!(out, "variables {}", lp.num_vars());
    let _ = write!(out, "objective");
    for &c in &lp.objective {
        let _ = write!(out, " {}", Num(c));
    }
    let _ = writeln!(out);
    for i in 0..lp.num_rows() {
        let _ = writeln!(out, "row {i} {} {}", lp.row_sense[i], Num(lp.rhs[i]));
    }
    for j in 0..lp.num_vars() {
        let (lo, hi) = (lp.var_lower[j], lp.var_upper[j]);
        if lo != 0.0 || hi != f64::INFINITY {
            let _ = writeln!(out, "bound {j} {} {}", Num(lo), Num(hi));
        }
    }
    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in row {
            let _ = writeln!(out, "{i} {j} {}", Num(a));
        }
    }
}

/// Writes the `[bands]` and `[deviations]` sections.
pub fn write_uncertainty(out: &mut String, u: &MultiBandUncertaintySet) {
    let _ = writeln!(out, "[bands]");
    let p = &u.profile;
    for q in 0..p.num_bands() {
        let _ = writeln!(out, "band {} {} {}", p.band_ids[q], p.lower[q], p.upper[q]);
    }
    for (i, p) in &u.row_profiles {
        for q in 0..p.num_bands() {
            let _ = writeln!(
                out,
                "override {i} {} {} {}",
                p.band_ids[q], p.lower[q], p.upper[q]
            );
        }
    }
    let _ = writeln!(out, "[deviations]");
    for (&(i, j), d) in &u.deviations {
        let ids = &u.profile_for(i).band_ids;
        for (k, v) in ids.iter().zip(d) {
            let _ = writeln!(out, "{i} {j} {k} {}", Num(*v));
        }
    }
}

pub fn write_instance(lp: &LinearProgram, u: &MultiBandUncertaintySet) -> String {
    let mut out = String::new();
    write_lp(&mut out, lp);
    write_uncertainty(&mut out, u);
    out
}

/// One value per line; blank lines and `#` comments are skipped.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        out.push(num(content, idx + 1, "vector entry")?);
    }
    Ok(out)
}

pub fn write_vector(x: &[f64]) -> String {
    let mut out = String::new();
    for &v in x {
        let _ = writeln!(out, "{}", Num(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = "\
# tiny
[lp]
sense maximize
variables 2
objective 1 1
row 0 <= 10
row 1 >= 1
bound 1 0 inf
0 0 1.5
0 1 2
1 0 1
[bands]
band -1 0 1
band 0 0 2
band 1 0 1
override 1 0 0 2
override 1 1 1 1
[deviations]
0 0 -1 -0.2
0 0 1 0.3
1 0 1 0.25
";

    #[test]
    fn parses_sample() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.lp.num_vars(), 2);
        assert_eq!(inst.lp.rows[0], vec![(0, 1.5), (1, 2.0)]);
        assert_eq!(inst.lp.row_sense[1], RowSense::Ge);
        let u = &inst.uncertainty;
        assert_eq!(u.profile.band_ids, vec![-1, 0, 1]);
        assert_eq!(u.profile_for(1).band_ids, vec![0, 1]);
        assert_eq!(u.deviations[&(0, 0)], vec![-0.2, 0.0, 0.3]);
        assert_eq!(u.deviations[&(1, 0)], vec![0.0, 0.25]);
    }

    #[test]
    fn writer_output_parses_back() {
        let inst = parse_instance(SAMPLE).unwrap();
        let text = write_instance(&inst.lp, &inst.uncertainty);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.lp, inst.lp);
        assert_eq!(back.uncertainty, inst.uncertainty);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("0 1 2\n", "0 1 two\n");
        let e = parse_instance(&bad).unwrap_err();
        assert_eq!(e.line, 10);
        let bad = SAMPLE.replace("0 0 1 0.3\n", "");
        let e = parse_instance(&bad).unwrap_err();
        assert!(e.message.contains("lacks band 1"), "{e}");
        let e = parse_instance("0 0 1\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn missing_bands_section_means_no_uncertainty() {
        let text = "[lp]\nsense min\nvariables 1\nobjective 1\nrow 0 >= 2\n0 0 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.uncertainty.is_empty());
        assert_eq!(inst.uncertainty.profile.upper, vec![1]);
    }

    #[test]
    fn extra_sections_are_kept() {
        let text = format!("{SAMPLE}[varmap]\nx 0\nx 1\n");
        let inst = parse_instance(&text).unwrap();
        assert_eq!(inst.extra["varmap"].len(), 2);
        assert_eq!(inst.extra["varmap"][1].1, "x 1");
    }

    fn arb_instance() -> impl Strategy<Value = (LinearProgram, MultiBandUncertaintySet)> {
        (1usize..5, 1usize..4).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(-1e6f64..1e6, n),
                proptest::collection::vec(
                    proptest::collection::vec(proptest::option::of(-1e3f64..1e3), n),
                    m,
                ),
                proptest::collection::vec(0usize..3, m),
                proptest::collection::vec(-1e3f64..1e3, m),
                proptest::collection::vec(
                    proptest::option::of((1e-9f64..1.0, 1e-9f64..1.0)),
                    n * m,
                ),
            )
                .prop_map(move |(c, a, senses, b, devs)| {
                    let mut lp = LinearProgram::new(Sense::Minimize, c);
                    for i in 0..m {
                        let row = a[i]
                            .iter()
                            .enumerate()
                            .filter_map(|(j, v)| v.map(|v| (j, v)))
                            .collect();
                        let s = [RowSense::Le, RowSense::Ge, RowSense::Eq][senses[i]];
                        lp.add_row(row, s, b[i]);
                    }
                    lp.var_upper[0] = 7.25;
                    let mut u =
                        MultiBandUncertaintySet::new(BandProfile::symmetric(1, 1, vec![1, n, 1]));
                    for (idx, d) in devs.iter().enumerate() {
                        if let Some((lo, hi)) = d {
                            u.insert(idx / n, idx % n, vec![-lo, 0.0, *hi]);
                        }
                    }
                    (lp, u)
                })
        })
    }

    proptest! {
        #[test]
        fn parse_inverts_write((lp, u) in arb_instance()) {
            let text = write_instance(&lp, &u);
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(back.lp, lp);
            prop_assert_eq!(back.uncertainty, u);
        }

        #[test]
        fn vectors_round_trip(x in proptest::collection::vec(-1e12f64..1e12, 0..20)) {
            prop_assert_eq!(parse_vector(&write_vector(&x)).unwrap(), x);
        }
    }
}
