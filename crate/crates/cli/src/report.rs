//! Report types and their table / CSV renderings. JSON is plain serde.

use num_bigint::BigInt;
use quasiweight::families::{ClosedFormRow, FamilyTag};
use quasiweight::minweight::{Condition, StabilityReport};
use quasiweight::{
    IntegerMatrix, MinWeight, QuasiPolynomial, TutteQuasi, UniPoly, WeightDistribution, WeightQuasi,
    WeightSource,
};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::error::CliError;

pub trait Report: Serialize {
    fn table(&self) -> String;
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>);
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => Ok(report.table()),
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let (header, rows) = report.csv();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8_lossy(&bytes).into_owned())
        }
    }
}

/// Left-aligned columns separated by two spaces.
fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn joined(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// `Σ f_i(q) x^(n-i) y^i` with each coefficient written in `q`.
pub fn enumerator(fs: &[UniPoly]) -> String {
    let n = fs.len().saturating_sub(1);
    let mut terms = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let mono = match (n - i, i) {
            (0, 0) => String::new(),
            (a, b) => [("x", a), ("y", b)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*"),
        };
        let coeff = f.display_with("q");
        terms.push(match (coeff.as_str(), mono.is_empty()) {
            (c, true) => c.to_string(),
            ("1", false) => mono,
            (c, false) if f.coeffs().len() > 1 => format!("({c})*{mono}"),
            (c, false) => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub weights: WeightQuasi,
    pub characteristic: QuasiPolynomial,
}

impl Report for AnalyzeReport {
    fn table(&self) -> String {
        let w = &self.weights;
        let mut out = format!(
            "k = {}, n = {}, rank = {}\nelementary divisors: {}\nrho0 = {}\n\n",
            w.k(),
            w.n(),
            w.rank(),
            joined(w.kernel_chain().divisors()),
            w.rho0()
        );
        let rows: Vec<Vec<String>> = w
            .classes()
            .map(|m| vec![m.to_string(), enumerator(w.constituents(m).unwrap_or_default())])
            .collect();
        out += &grid(&["gcd(q,rho0)", "weight enumerator"], &rows);
        out += "\n";
        let rows: Vec<Vec<String>> = self
            .characteristic
            .constituents()
            .map(|(m, c)| vec![m.to_string(), c.display_with("q")])
            .collect();
        out += &grid(&["gcd(q,rho0)", "characteristic"], &rows);
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        constituent_rows(&self.weights)
    }
}

fn constituent_rows(w: &WeightQuasi) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    for m in w.classes() {
        for (i, f) in w.constituents(m).unwrap_or_default().iter().enumerate() {
            rows.push(vec![m.to_string(), i.to_string(), f.display_with("q")]);
        }
    }
    (vec!["class", "weight", "constituent"], rows)
}

/// Raw constituents, JSON-compatible with [`WeightQuasi`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstituentReport(pub WeightQuasi);

impl Report for ConstituentReport {
    fn table(&self) -> String {
        let (_, rows) = constituent_rows(&self.0);
        let mut out = format!("rho0 = {}\n", self.0.rho0());
        out += &grid(&["gcd(q,rho0)", "i", "f_i(q)"], &rows);
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        constituent_rows(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistributionReport(pub Vec<WeightDistribution>);

impl Report for DistributionReport {
    fn table(&self) -> String {
        let n = self.0.first().map_or(0, WeightDistribution::n);
        let header: Vec<String> = std::iter::once("q".to_string())
            .chain((0..=n).map(|i| format!("A_{i}")))
            .chain(["min weight".to_string()])
            .collect();
        let rows: Vec<Vec<String>> = self
            .0
            .iter()
            .map(|d| {
                std::iter::once(d.q.to_string())
                    .chain(d.counts.iter().map(ToString::to_string))
                    .chain([d.min_weight().to_string()])
                    .collect()
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        grid(&header, &rows)
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .0
            .iter()
            .flat_map(|d| {
                d.counts
                    .iter()
                    .enumerate()
                    .map(|(i, a)| vec![d.q.to_string(), i.to_string(), a.to_string()])
            })
            .collect();
        (vec!["q", "weight", "count"], rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QWeight {
    #[serde(with = "quasiweight::json::big_int")]
    pub q: BigInt,
    pub d: MinWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinWeightReport {
    pub classes: StabilityReport,
    /// Every elementary divisor of `G` is 1, so stability holds for all `m ≥ 2`.
    pub unimodular: bool,
    pub range: Vec<QWeight>,
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

impl Report for MinWeightReport {
    fn table(&self) -> String {
        let t = &self.classes;
        let mut out = format!("rho0 = {}, m0 = {}, d_m0 = {}\n", t.rho0, t.m0, t.d_m0);
        if self.unimodular {
            out += "all elementary divisors are 1: stable for every m >= 2\n";
        }
        out += "\n";
        let rows: Vec<Vec<String>> = t
            .classes
            .iter()
            .map(|c| {
                vec![
                    c.m.to_string(),
                    c.d_prime.to_string(),
                    c.d_at_m.to_string(),
                    yes(c.stable_at_m),
                    match c.condition {
                        Some(Condition::GcdRatio) => "(i)".into(),
                        Some(Condition::RankStep) => "(ii)".into(),
                        None => "-".into(),
                    },
                    c.witness_subset.as_ref().map_or("-".into(), |j| {
                        format!("{{{}}}", j.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                    }),
                    yes(c.coprime_to_last_divisor),
                    yes(c.divides_first_divisor),
                ]
            })
            .collect();
        out += &grid(
            &["m", "d'_m", "d_m", "stable", "condition", "witness", "gcd(m,e_r)=1", "m|e_1"],
            &rows,
        );
        if !t.coprime_converse_fails.is_empty() {
            out += &format!("stable without gcd(m,e_r)=1: {}\n", joined(&t.coprime_converse_fails));
        }
        if !t.divisibility_converse_fails.is_empty() {
            out += &format!("unstable without m|e_1: {}\n", joined(&t.divisibility_converse_fails));
        }
        out += "\n";
        let (header, rows) = self.csv();
        out += &grid(&header, &rows);
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .range
            .iter()
            .map(|r| vec![r.q.to_string(), r.d.to_string()])
            .collect();
        (vec!["q", "d_q"], rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TutteReport(pub TutteQuasi);

impl Report for TutteReport {
    fn table(&self) -> String {
        let mut out = format!("rho0 = {}\n", self.0.rho0());
        let (header, rows) = self.csv();
        out += &grid(&header, &rows);
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .0
            .classes()
            .map(|(m, p)| vec![m.to_string(), p.display_with("u", "v")])
            .collect();
        (vec!["gcd(N,rho0)", "Q(u,v)"], rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteValue {
    pub u: String,
    pub v: String,
    pub value: String,
    /// Outcome of the inverse Greene check, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub greene: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TutteValues(pub Vec<TutteValue>);

impl Report for TutteValues {
    fn table(&self) -> String {
        let (header, rows) = self.csv();
        grid(&header, &rows)
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let with_greene = self.0.iter().any(|t| t.greene.is_some());
        let rows = self
            .0
            .iter()
            .map(|t| {
                let mut row = vec![t.u.clone(), t.v.clone(), t.value.clone()];
                if with_greene {
                    row.push(t.greene.map_or("-".into(), yes));
                }
                row
            })
            .collect();
        let mut header = vec!["u", "v", "Q"];
        if with_greene {
            header.push("greene");
        }
        (header, rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub tag: FamilyTag,
    pub k: usize,
    #[serde(with = "quasiweight::json::big_int")]
    pub period: BigInt,
    pub generator: IntegerMatrix,
    pub transformed: IntegerMatrix,
    pub rows: Vec<ClosedFormRow>,
}

impl Report for FamilyReport {
    fn table(&self) -> String {
        let mut out = format!("{}_{} generator\n{}\n", self.tag, self.k, self.generator.to_text());
        out += &format!("transformed generator\n{}\n", self.transformed.to_text());
        out += &format!("period = {}\n", self.period);
        let (_, rows) = self.csv();
        out += &grid(&["q", "gcd(q,period)", "chi(q)"], &rows);
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .rows
            .iter()
            .map(|r| vec![r.q.to_string(), r.class.to_string(), r.chi.to_string()])
            .collect();
        (vec!["q", "class", "chi"], rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    /// First counterexample, for failed checks.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckLine>,
}

impl Report for VerifyReport {
    fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out += if c.passed { "PASS  " } else { "FAIL  " };
            out += &c.name;
            if let Some(d) = &c.detail {
                out += ": ";
                out += d;
            }
            out += "\n";
        }
        out
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .checks
            .iter()
            .map(|c| vec![c.name.clone(), yes(c.passed), c.detail.clone().unwrap_or_default()])
            .collect();
        (vec!["check", "passed", "detail"], rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quasiweight::families::{generator, tabulate};
    use quasiweight::minweight::stability_report;
    use quasiweight::quasi::{characteristic_quasi, weight_distribution, weight_quasi};
    use quasiweight::tutte::tutte_quasi;
    use quasiweight::{build_profile, Rational};
    use serde::de::DeserializeOwned;

    fn round_trip<R: Report + DeserializeOwned + PartialEq + std::fmt::Debug>(r: &R) {
        let text = render(r, Format::Json).unwrap();
        let back: R = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, r);
        assert!(!render(r, Format::Table).unwrap().is_empty());
        assert!(render(r, Format::Csv).unwrap().lines().count() >= 1);
    }

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    #[test]
    fn enumerator_text() {
        assert_eq!(enumerator(&[poly(&[1]), poly(&[-1, 1])]), "x + (q - 1)*y");
        assert_eq!(enumerator(&[poly(&[1]), poly(&[]), poly(&[3])]), "x^2 + 3*y^2");
        assert_eq!(enumerator(&[poly(&[2])]), "2");
    }

    #[test]
    fn every_report_round_trips() {
        let g = IntegerMatrix::from_i64(&[vec![2, 0], vec![0, 4]]).unwrap();
        let p = build_profile(&g).unwrap();
        let wq = weight_quasi(&p).unwrap();
        let chi = characteristic_quasi(&p, &wq).unwrap();
        round_trip(&AnalyzeReport {
            weights: wq.clone(),
            characteristic: chi,
        });
        round_trip(&ConstituentReport(wq.clone()));
        round_trip(&DistributionReport(vec![weight_distribution(&wq, &BigInt::from(4)).unwrap()]));
        round_trip(&MinWeightReport {
            classes: stability_report(&p, &wq, 64, 8).unwrap(),
            unimodular: false,
            range: vec![QWeight {
                q: 2.into(),
                d: MinWeight::Infinite,
            }],
        });
        round_trip(&TutteReport(tutte_quasi(&p).unwrap()));
        round_trip(&TutteValues(vec![TutteValue {
            u: "3/2".into(),
            v: "3".into(),
            value: "7".into(),
            greene: Some(true),
        }]));
        let spec = generator(FamilyTag::N, 3).unwrap();
        round_trip(&FamilyReport {
            tag: FamilyTag::N,
            k: 3,
            period: 2.into(),
            generator: spec.generator,
            transformed: spec.transformed,
            rows: tabulate(FamilyTag::N, 3, &1.into(), &4.into()).unwrap(),
        });
        round_trip(&VerifyReport {
            passed: false,
            checks: vec![CheckLine {
                name: "oracle".into(),
                passed: false,
                detail: Some("q=2, a \"quoted\", comma".into()),
            }],
        });
    }

    #[test]
    fn csv_quotes_commas() {
        let r = VerifyReport {
            passed: true,
            checks: vec![CheckLine {
                name: "a,b".into(),
                passed: true,
                detail: None,
            }],
        };
        assert_eq!(render(&r, Format::Csv).unwrap(), "check,passed,detail\n\"a,b\",yes,\n");
    }
}
