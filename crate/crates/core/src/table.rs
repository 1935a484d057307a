//! Invariant tables for the example families.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::bundle::BundleVariety;
use crate::catalog::{wps1_weights, wps2_weights};
use crate::error::{Error, Result};
use crate::foliation::{cone_foliation, fibration_foliation, pn_catalog, wps_coordinate_foliation};
use crate::lattice::Rational;
use crate::rank_one::{GeneralizedCone, PolarizedBase, WeightedProjectiveSpace};
use crate::synthesis::{synth_generalized_index, ExampleRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Family {
    Hirzebruch,
    Wps1,
    Wps2,
    Wps3,
    Wps4,
    Cone,
    Case1,
    Case2,
}

/// An inclusive integer range written `a..b`, or a single value `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn single(v: i64) -> Self {
        IntRange { lo: v, hi: v }
    }

    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    pub fn iter(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }

    fn positive(&self, flag: &str) -> Result<RangeInclusive<u32>> {
        if self.lo < 1 || self.hi > u32::MAX as i64 {
            return Err(Error::domain(format!("--{flag} values must be positive")));
        }
        Ok(self.lo as u32..=self.hi.max(0) as u32)
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("malformed range {s:?}")))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?);
                if lo > hi {
                    return Err(Error::Parse(format!("empty range {s:?}")));
                }
                Ok(IntRange { lo, hi })
            }
            None => parse(s).map(IntRange::single),
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Range flags of the `table` command; unset flags take family defaults.
#[derive(Debug, Clone, Default)]
pub struct TableParams {
    pub a: Option<IntRange>,
    pub n: Option<IntRange>,
    pub r: Option<IntRange>,
    pub m: Option<IntRange>,
    pub mprime: Option<IntRange>,
    pub a1: Option<IntRange>,
    pub a2: Option<IntRange>,
    pub k: Option<IntRange>,
    pub rprime: Option<IntRange>,
    pub d: Option<IntRange>,
    pub q: Option<IntRange>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

const INVARIANT_COLUMNS: [&str; 5] = ["-K_F", "gen_index", "fano_index", "seshadri", "r_a"];

fn opt(v: &Option<Rational>) -> String {
    v.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn invariant_cells(rec: &ExampleRecord) -> Vec<String> {
    vec![
        rec.foliation.minus_canonical().to_string(),
        opt(&rec.invariants.gen_index),
        opt(&rec.invariants.fano_index),
        opt(&rec.invariants.seshadri_antican),
        rec.foliation.algebraic_rank.to_string(),
    ]
}

struct Builder {
    table: Table,
}

impl Builder {
    fn new(params: &[&str]) -> Self {
        let columns = params
            .iter()
            .chain(INVARIANT_COLUMNS.iter())
            .map(|s| s.to_string())
            .collect();
        Builder {
            table: Table {
                columns,
                rows: Vec::new(),
            },
        }
    }

    fn row(&mut self, params: Vec<String>, rec: &ExampleRecord) {
        let mut cells = params;
        cells.extend(invariant_cells(rec));
        self.table.rows.push(cells);
    }
}

fn or(r: Option<IntRange>, lo: i64, hi: i64) -> IntRange {
    r.unwrap_or(IntRange::new(lo, hi))
}

fn wps_row(weights: Vec<u32>, j: u32) -> Result<ExampleRecord> {
    let w = WeightedProjectiveSpace::new(weights)?;
    ExampleRecord::build(
        "table",
        None,
        "table",
        wps_coordinate_foliation(&w, j)?,
        None,
    )
}

/// Builds the invariant table of a family over the requested ranges.
pub fn build_table(family: Family, p: &TableParams) -> Result<Table> {
    match family {
        Family::Hirzebruch => {
            let mut b = Builder::new(&["a"]);
            for a in or(p.a, 2, 6).positive("a")? {
                let x = BundleVariety::hirzebruch(a)?;
                let rec = ExampleRecord::build(
                    "table",
                    None,
                    "hirzebruch",
                    fibration_foliation(&x),
                    None,
                )?;
                b.row(vec![a.to_string()], &rec);
            }
            Ok(b.table)
        }
        Family::Wps1 => {
            let mut b = Builder::new(&["n", "m"]);
            for n in or(p.n, 3, 3).positive("n")? {
                if n < 3 {
                    return Err(Error::domain("wps1 needs n >= 3"));
                }
                for m in or(p.m, 2, 4).positive("m")? {
                    b.row(
                        vec![n.to_string(), m.to_string()],
                        &wps_row(wps1_weights(n, m), 1)?,
                    );
                }
            }
            Ok(b.table)
        }
        Family::Wps2 => {
            let mut b = Builder::new(&["n", "m'", "m"]);
            for n in or(p.n, 3, 3).positive("n")? {
                if n < 3 {
                    return Err(Error::domain("wps2 needs n >= 3"));
                }
                for mp in or(p.mprime, 1, 3).positive("mprime")? {
                    for m in or(p.m, 2, 5).positive("m")? {
                        if mp < m && mp.gcd(&m) == 1 {
                            let rec = wps_row(wps2_weights(n, mp, m), 1)?;
                            b.row(vec![n.to_string(), mp.to_string(), m.to_string()], &rec);
                        }
                    }
                }
            }
            Ok(b.table)
        }
        Family::Wps3 | Family::Wps4 => {
            let j = if family == Family::Wps3 { 1 } else { 2 };
            let mut b = Builder::new(&["a1", "a2"]);
            for a1 in or(p.a1, 1, 3).positive("a1")? {
                for a2 in or(p.a2, 1, 5).positive("a2")? {
                    if a1 <= a2 && a1.gcd(&a2) == 1 {
                        b.row(
                            vec![a1.to_string(), a2.to_string()],
                            &wps_row(vec![1, a1, a2], j)?,
                        );
                    }
                }
            }
            Ok(b.table)
        }
        Family::Cone => {
            let mut b = Builder::new(&["k", "r'", "m", "d"]);
            for k in or(p.k, 2, 2).positive("k")? {
                if k < 2 {
                    return Err(Error::domain("cone bases need k >= 2"));
                }
                for rp in or(p.rprime, 2, 2).positive("rprime")? {
                    for m in or(p.m, 2, 2).positive("m")? {
                        let y = GeneralizedCone::new(PolarizedBase::projective_space(k)?, m, rp)?;
                        // Rows stop before d = m r', where -K_F stops being ample.
                        let cap = m as i64 * rp as i64 - 1;
                        let d_range = or(p.d, 0, 3);
                        for d in d_range.lo.max(-1)..=d_range.hi.min(cap) {
                            let h = pn_catalog(k, 1, d)?;
                            let rec = ExampleRecord::build(
                                "table",
                                None,
                                "cone",
                                cone_foliation(&y, &h)?,
                                None,
                            )?;
                            b.row(
                                vec![k.to_string(), rp.to_string(), m.to_string(), d.to_string()],
                                &rec,
                            );
                        }
                    }
                }
            }
            Ok(b.table)
        }
        Family::Case1 => {
            let mut b = Builder::new(&["r", "c", "l", "b"]);
            for r in or(p.r, 2, 3).positive("r")? {
                for q in or(p.q, 2, 4).positive("q")? {
                    for pp in (q + 1)..(q * r) {
                        if pp.gcd(&q) != 1 {
                            continue;
                        }
                        let c = Rational::new(pp as i64, q as i64);
                        let rec = synth_generalized_index(r + 1, r, &c)?;
                        let params = rec
                            .parameters
                            .clone()
                            .ok_or_else(|| Error::Internal("case1 without parameters".into()))?;
                        b.row(
                            vec![
                                r.to_string(),
                                c.to_string(),
                                params.l.map_or_else(|| "-".into(), |l| l.to_string()),
                                format!("{:?}", params.b_list),
                            ],
                            &rec,
                        );
                    }
                }
            }
            Ok(b.table)
        }
        Family::Case2 => {
            let mut b = Builder::new(&["n", "r", "c", "m", "b"]);
            for n in or(p.n, 3, 3).positive("n")? {
                if n < 3 {
                    return Err(Error::domain("case2 needs n >= 3"));
                }
                let r_range = p.r.unwrap_or(IntRange::single(n as i64 - 1));
                for r in r_range.positive("r")? {
                    if r >= n {
                        continue;
                    }
                    for q in or(p.q, 2, 4).positive("q")? {
                        for pp in 1..q {
                            if pp.gcd(&q) != 1 {
                                continue;
                            }
                            let c = Rational::new(pp as i64, q as i64);
                            let rec = synth_generalized_index(n, r, &c)?;
                            b.row(
                                vec![
                                    n.to_string(),
                                    r.to_string(),
                                    c.to_string(),
                                    q.to_string(),
                                    format!("[{}]", q - 1),
                                ],
                                &rec,
                            );
                        }
                    }
                }
            }
            Ok(b.table)
        }
    }
}

const MAX_CELL: usize = 32;

impl Table {
    /// Aligned text with long cells shortened; JSON and CSV carry the full
    /// values.
    pub fn to_text(&self) -> String {
        let clip = |s: &str| -> String {
            if s.chars().count() > MAX_CELL {
                let head: String = s.chars().take(MAX_CELL - 3).collect();
                format!("{head}...")
            } else {
                s.to_string()
            }
        };
        let cells: Vec<Vec<String>> = std::iter::once(&self.columns)
            .chain(self.rows.iter())
            .map(|row| row.iter().map(|c| clip(c)).collect())
            .collect();
        let mut widths = vec![0; self.columns.len()];
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
            if i == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                out.push_str(&rule.join("  "));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s =
            serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}
