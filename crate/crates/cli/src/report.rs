use std::fmt::Write as _;

use serde::Serialize;
use threeway_core::lp::Verdict;
use threeway_core::reductions::{EmbeddingSpec, GadgetSpecA, GadgetSpecB};
use threeway_core::{EntryIndex, Matrix, RealTable3, Violation};

use crate::instance::InstanceFile;

/// The machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    /// `sha256:<hex>` of the input bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub answer: Answer,
    pub diagnostics: Diagnostics,
    /// Wall-clock milliseconds; only with `--timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Answer {
    Consistency {
        consistent: bool,
        total: Option<u64>,
    },
    Exists {
        exists: bool,
    },
    /// Decimal string.
    Count {
        count: String,
    },
    ValueSet {
        entry: EntryIndex,
        values: Vec<u64>,
        frechet_upper: u64,
    },
    Instance {
        instance: Box<InstanceFile>,
        #[serde(skip_serializing_if = "Option::is_none")]
        gadget: Option<Gadget>,
    },
    TriviallyInfeasible {
        reason: String,
    },
    Lp {
        verdict: Verdict,
        /// Exact rationals such as `"1/2"`, nested over `i`, `j`, `k`.
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<Vec<Vec<String>>>>,
    },
    Permanent {
        permanent: String,
    },
    /// A state or node cap stopped the computation.
    Incomplete {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "gadget")]
pub enum Gadget {
    #[serde(rename = "secure_zero")]
    A(GadgetSpecA),
    #[serde(rename = "secure_frechet")]
    B(Box<GadgetSpecB>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub(crate) fn witness_strings(x: &RealTable3) -> Vec<Vec<Vec<String>>> {
    x.to_nested()
        .into_iter()
        .map(|plane| plane.into_iter().map(|line| line.into_iter().map(|v| v.to_string()).collect()).collect())
        .collect()
}

/// Right-aligned grid with a header row.
fn grid(out: &mut String, corner: &str, cols: &[String], rows: &[(String, Vec<String>)]) {
    let label_w = rows.iter().map(|(l, _)| l.len()).chain([corner.len()]).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols.len())
        .map(|c| rows.iter().map(|(_, v)| v[c].len()).chain([cols[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |out: &mut String, label: &str, cells: &[String]| {
        let _ = write!(out, "  {label:<label_w$}");
        for (cell, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {cell:>w$}");
        }
        out.push('\n');
    };
    line(out, corner, cols);
    for (label, cells) in rows {
        line(out, label, cells);
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|x| format!("{prefix}{x}")).collect()
}

fn matrix_rows(m: &Matrix<u64>, labels: &[String]) -> Vec<(String, Vec<String>)> {
    labels.iter().enumerate().map(|(a, l)| (l.clone(), m.row(a).iter().map(u64::to_string).collect())).collect()
}

fn embedded_blocks(out: &mut String, inst: &InstanceFile, spec: &EmbeddingSpec) {
    let m = inst.two_marginals.as_ref().expect("validated embedded instance");
    let d = inst.dims;
    let pairs: Vec<String> = (0..d.c).map(|q| spec.pair_label(q)).collect();
    let segs: Vec<String> = (0..d.h).map(|g| spec.segment_label(g)).collect();
    let ts = numbered("t=", 3);
    let _ = writeln!(out, "v(t, ij, +):");
    grid(out, "", &pairs, &matrix_rows(m.ij(), &ts));
    let _ = writeln!(out, "v(t, +, gro k):");
    grid(out, "", &ts, &matrix_rows(&m.ik().transpose(), &segs));
    let _ = writeln!(out, "v(+, ij, gro k):");
    grid(out, "", &pairs, &matrix_rows(&m.jk().transpose(), &segs));
    let _ = writeln!(out, "U = {}", spec.u);
}

pub(crate) fn instance_text(out: &mut String, inst: &InstanceFile) {
    let d = inst.dims;
    let _ = writeln!(out, "dims: ({}, {}, {})", d.r, d.c, d.h);
    match (&inst.embedding_spec, &inst.two_marginals) {
        (Some(spec), _) => embedded_blocks(out, inst, spec),
        (None, Some(m)) => {
            let _ = writeln!(out, "v(i, j, +):");
            grid(out, "", &numbered("j=", d.c), &matrix_rows(m.ij(), &numbered("i=", d.r)));
            let _ = writeln!(out, "v(i, +, k):");
            grid(out, "", &numbered("k=", d.h), &matrix_rows(m.ik(), &numbered("i=", d.r)));
            let _ = writeln!(out, "v(+, j, k):");
            grid(out, "", &numbered("k=", d.h), &matrix_rows(m.jk(), &numbered("j=", d.c)));
        }
        (None, None) => {}
    }
    if let Some(u) = &inst.one_marginals {
        let _ = writeln!(out, "u(i, +, +): {:?}", u.rows());
        let _ = writeln!(out, "u(+, j, +): {:?}", u.cols());
        let _ = writeln!(out, "u(+, +, k): {:?}", u.layers());
    }
    if let Some(p) = &inst.upper_bounds {
        for k in 0..d.h {
            let slice = Matrix::from_fn(d.r, d.c, |i, j| *p.at(i, j, k));
            let _ = writeln!(out, "p(i, j, {}):", k + 1);
            grid(out, "", &numbered("j=", d.c), &matrix_rows(&slice, &numbered("i=", d.r)));
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(out, "input: {d}");
        }
        match &self.answer {
            Answer::Consistency { consistent, total } => {
                let _ = writeln!(out, "consistent: {consistent}");
                if let Some(t) = total {
                    let _ = writeln!(out, "total: {t}");
                }
            }
            Answer::Exists { exists } => {
                let _ = writeln!(out, "exists: {exists}");
            }
            Answer::Count { count } => {
                let _ = writeln!(out, "count: {count}");
            }
            Answer::ValueSet { entry, values, frechet_upper } => {
                let vals: Vec<String> = values.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "entry {entry}: {{{}}}", vals.join(", "));
                let _ = writeln!(out, "frechet upper bound: {frechet_upper}");
            }
            Answer::Instance { instance, gadget } => {
                instance_text(&mut out, instance);
                match gadget {
                    Some(Gadget::A(a)) => {
                        let _ = writeln!(out, "gadget: secure zero, T = {}, target {}", a.total, a.target);
                    }
                    Some(Gadget::B(b)) => {
                        let _ = writeln!(
                            out,
                            "gadget: secure frechet, n = {}, target {} = {}",
                            b.n, b.target, b.target_value
                        );
                    }
                    None => {}
                }
            }
            Answer::TriviallyInfeasible { reason } => {
                let _ = writeln!(out, "trivially infeasible: {reason}");
            }
            Answer::Lp { verdict, witness } => {
                let _ = writeln!(out, "lp: {}", if *verdict == Verdict::Feasible { "feasible" } else { "infeasible" });
                if let Some(w) = witness {
                    for (i, plane) in w.iter().enumerate() {
                        let c = plane.len();
                        let h = plane.first().map_or(0, Vec::len);
                        let _ = writeln!(out, "x({}, j, k):", i + 1);
                        let rows: Vec<_> =
                            plane.iter().enumerate().map(|(j, line)| (format!("j={}", j + 1), line.clone())).collect();
                        debug_assert_eq!(rows.len(), c);
                        grid(&mut out, "", &numbered("k=", h), &rows);
                    }
                }
            }
            Answer::Permanent { permanent } => {
                let _ = writeln!(out, "permanent: {permanent}");
            }
            Answer::Incomplete { reason } => {
                let _ = writeln!(out, "incomplete: {reason}");
            }
        }
        for v in &self.diagnostics.violations {
            let _ = writeln!(out, "violation: {} ({} vs {})", v.equation, v.lhs, v.rhs);
        }
        for n in &self.diagnostics.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        out
    }
}
