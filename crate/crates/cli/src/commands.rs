use std::fs;
use std::io::{self, Read};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use quasiweight::exact::{format_rational, parse_rational};
use quasiweight::families::{
    family_min_weight, family_period, generator, parity_obstruction, tabulate, FamilyTag,
};
use quasiweight::minweight::{min_weights_over, stability_report};
use quasiweight::oracle::{enumerate_with, OracleResult};
use quasiweight::quasi::{
    characteristic_quasi, degree_ladder, weight_census, weight_distribution, weight_quasi,
    DEFAULT_MAX_CLASSES,
};
use quasiweight::tutte::{greene_forward_check, greene_inverse_check, tutte_eval, tutte_quasi};
use quasiweight::{
    build_profile_with, DivisorProfile, IntegerMatrix, MinWeight, ProfileOptions, Rational,
    WeightQuasi, WeightSource,
};

use crate::args::{Cli, Command, Format, Input, QRange};
use crate::error::CliError;
use crate::report::*;

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

struct Loaded {
    matrix: IntegerMatrix,
    family: Option<(FamilyTag, usize)>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    if let Some(spec) = &input.family {
        let tag: FamilyTag = spec[0].parse()?;
        let k = spec[1]
            .parse()
            .map_err(|_| CliError::Usage(format!("family rank {:?} is not a number", spec[1])))?;
        return Ok(Loaded {
            matrix: generator(tag, k)?.generator,
            family: Some((tag, k)),
        });
    }
    let path = input
        .path
        .as_deref()
        .ok_or_else(|| CliError::Usage("no input given".into()))?;
    Ok(Loaded {
        matrix: IntegerMatrix::parse(&read_text(path)?)?,
        family: None,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = ProfileOptions { max_n: cli.max_n };
    let profile = |input: &Input| -> Result<(Loaded, DivisorProfile), CliError> {
        let loaded = load(input)?;
        let p = build_profile_with(&loaded.matrix, opts)?;
        Ok((loaded, p))
    };
    let fmt = cli.format;

    match &cli.command {
        Command::Analyze { input } => {
            let (_, p) = profile(input)?;
            let weights = weight_quasi(&p)?;
            let characteristic = characteristic_quasi(&p, &weights)?;
            let report = AnalyzeReport {
                weights,
                characteristic,
            };
            render(&report, fmt).map(Outcome::ok)
        }
        Command::Constituents { input, q } => {
            let (_, p) = profile(input)?;
            match q.values() {
                None => render(&ConstituentReport(weight_quasi(&p)?), fmt).map(Outcome::ok),
                Some(qs) => {
                    let census = weight_census(&p);
                    let dists = qs
                        .iter()
                        .map(|q| weight_distribution(&census, q))
                        .collect::<Result<Vec<_>, _>>()?;
                    render(&DistributionReport(dists), fmt).map(Outcome::ok)
                }
            }
        }
        Command::Minweight { input, q } => {
            let (_, p) = profile(input)?;
            let census = weight_census(&p);
            let classes = stability_report(&p, &census, DEFAULT_MAX_CLASSES, 64)?;
            let qs = q.values_or(2, 10);
            let (from, to) = (qs[0].clone(), qs[qs.len() - 1].clone());
            let range = min_weights_over(&census, &from, &to)?
                .into_iter()
                .map(|(q, d)| QWeight { q, d })
                .collect();
            let report = MinWeightReport {
                classes,
                unimodular: p.full_chain().divisors().iter().all(One::is_one),
                range,
            };
            render(&report, fmt).map(Outcome::ok)
        }
        Command::Tutte {
            input,
            u,
            v,
            grid,
            greene,
        } => {
            let (_, p) = profile(input)?;
            let tq = tutte_quasi(&p)?;
            let points: Vec<(Rational, Rational)> = match (u, v, grid) {
                (Some(u), Some(v), _) => vec![(parse_rational(u)?, parse_rational(v)?)],
                (_, _, Some(r)) => grid_points(r),
                _ if *greene => {
                    return Err(CliError::Usage("--greene needs --u/--v or --grid".into()))
                }
                _ => return render(&TutteReport(tq), fmt).map(Outcome::ok),
            };
            let wq = if *greene { Some(weight_quasi(&p)?) } else { None };
            let mut values = Vec::new();
            for (u, v) in points {
                let value = tutte_eval(&tq, &u, &v)?;
                let greene = match &wq {
                    Some(wq) => {
                        let (ui, vi) = match (u.is_integer(), v.is_integer()) {
                            (true, true) => (u.to_integer(), v.to_integer()),
                            _ => return Err(CliError::Usage("--greene needs integer u and v".into())),
                        };
                        Some(greene_inverse_check(&p, wq, &tq, &ui, &vi)?.holds())
                    }
                    None => None,
                };
                values.push(TutteValue {
                    u: format_rational(&u),
                    v: format_rational(&v),
                    value: format_rational(&value),
                    greene,
                });
            }
            render(&TutteValues(values), fmt).map(Outcome::ok)
        }
        Command::Family {
            tag,
            k,
            q,
            emit_matrix,
        } => {
            let spec = generator(*tag, *k)?;
            if *emit_matrix {
                let text = match fmt {
                    Format::Json => serde_json::to_string(&spec.generator)? + "\n",
                    _ => spec.generator.to_text(),
                };
                return Ok(Outcome::ok(text));
            }
            let qs = q.values_or(1, 12);
            let rows = tabulate(*tag, *k, &qs[0], &qs[qs.len() - 1])?;
            let report = FamilyReport {
                tag: *tag,
                k: *k,
                period: family_period(*k),
                generator: spec.generator,
                transformed: spec.transformed,
                rows,
            };
            render(&report, fmt).map(Outcome::ok)
        }
        Command::Verify {
            input,
            q,
            constituents,
        } => {
            let (loaded, p) = profile(input)?;
            let wq = match constituents {
                Some(path) => serde_json::from_str(&read_text(path)?)?,
                None => weight_quasi(&p)?,
            };
            let report = verify(&loaded, &p, &wq, &q.values_or(1, 12), cli.oracle_budget)?;
            let code = if report.passed { 0 } else { 2 };
            Ok(Outcome {
                text: render(&report, fmt)?,
                code,
            })
        }
    }
}

fn grid_points(r: &QRange) -> Vec<(Rational, Rational)> {
    let vals = r.values();
    let mut out = Vec::new();
    for u in &vals {
        for v in &vals {
            out.push((Rational::from_integer(u.clone()), Rational::from_integer(v.clone())));
        }
    }
    out
}

type Check = Result<(), String>;

fn first_failure<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Check) -> Check {
    items.into_iter().try_for_each(f)
}

fn verify(
    loaded: &Loaded,
    p: &DivisorProfile,
    wq: &WeightQuasi,
    qs: &[BigInt],
    budget: u64,
) -> Result<VerifyReport, CliError> {
    let mut checks = Vec::new();
    let mut push = |name: &str, r: Check| {
        checks.push(CheckLine {
            name: name.to_string(),
            passed: r.is_ok(),
            detail: r.err(),
        })
    };
    let finish = |checks: Vec<CheckLine>| VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    };

    let shape = (wq.n(), wq.k(), wq.rank(), wq.rho0()) == (p.n(), p.k(), p.full_rank(), p.rho0());
    if !shape {
        push(
            "constituents belong to this matrix",
            Err(format!(
                "constituents have n = {}, rho0 = {}; matrix has n = {}, rho0 = {}",
                wq.n(),
                wq.rho0(),
                p.n(),
                p.rho0()
            )),
        );
        return Ok(finish(checks));
    }

    let oracle: Vec<OracleResult> = qs
        .iter()
        .map(|q| enumerate_with(&loaded.matrix, q, budget))
        .collect::<Result<_, _>>()?;

    push(
        "weight distributions equal brute-force enumeration",
        first_failure(&oracle, |o| match weight_distribution(wq, o.q()) {
            Err(e) => Err(format!("q = {}: {e}", o.q())),
            Ok(d) if d != o.distribution => Err(format!(
                "q = {}: pipeline {} vs enumeration {}",
                o.q(),
                counts(&d.counts),
                counts(&o.distribution.counts)
            )),
            Ok(_) => Ok(()),
        }),
    );
    push(
        "kernel sizes",
        first_failure(&oracle, |o| {
            let ours = wq.kernel_size(o.q());
            if ours == o.kernel_size {
                Ok(())
            } else {
                Err(format!("q = {}: {ours} vs {}", o.q(), o.kernel_size))
            }
        }),
    );
    push(
        "characteristic constituents are monic over Z",
        characteristic_quasi(p, wq).map_err(|e| e.to_string()).and_then(|chi| {
            first_failure(chi.constituents(), |(m, c)| {
                if c.is_monic() && c.coeffs().iter().all(Rational::is_integer) {
                    Ok(())
                } else {
                    Err(format!("class {m}: {c}"))
                }
            })
        }),
    );
    push(
        "degree ladder",
        first_failure(wq.classes(), |m| {
            degree_ladder(p, wq, m).map(drop).map_err(|e| e.to_string())
        }),
    );

    let tq = tutte_quasi(p)?;
    push(
        "Greene identity, forward",
        first_failure(qs, |q| {
            first_failure([(2, 1), (3, 1), (3, 2), (5, 2)], |(x, y)| {
                let (x, y) = (BigInt::from(x), BigInt::from(y));
                match greene_forward_check(p, wq, &tq, q, &x, &y) {
                    Ok(c) if c.holds() => Ok(()),
                    Ok(c) => Err(format!("q = {q}, (x, y) = ({x}, {y}): {} vs {}", c.lhs, c.rhs)),
                    Err(e) => Err(format!("q = {q}, (x, y) = ({x}, {y}): {e}")),
                }
            })
        }),
    );
    push(
        "Greene identity, inverse",
        first_failure(2..=6, |u| {
            first_failure(2..=6, |v| {
                let (u, v) = (BigInt::from(u), BigInt::from(v));
                match greene_inverse_check(p, wq, &tq, &u, &v) {
                    Ok(c) if c.holds() => Ok(()),
                    Ok(c) => Err(format!("(u, v) = ({u}, {v}): {} vs {}", c.lhs, c.rhs)),
                    Err(e) => Err(format!("(u, v) = ({u}, {v}): {e}")),
                }
            })
        }),
    );
    push(
        "minimum-weight stability",
        stability_report(p, wq, DEFAULT_MAX_CLASSES, 64)
            .map(drop)
            .map_err(|e| e.to_string()),
    );

    if let Some((tag, k)) = loaded.family {
        let coded: Vec<&OracleResult> = oracle.iter().filter(|o| o.q() > &BigInt::one()).collect();
        push(
            "parity obstructions",
            first_failure(&coded, |o| {
                if parity_obstruction(tag, k, &o.distribution) {
                    Ok(())
                } else {
                    Err(format!("q = {}: {}", o.q(), counts(&o.distribution.counts)))
                }
            }),
        );
        let d = family_min_weight(tag, k)?;
        push(
            "family minimum weight",
            first_failure(&coded, |o| match o.min_weight() {
                MinWeight::Finite(w) if w == d => Ok(()),
                other => Err(format!("q = {}: {other}, expected {d}", o.q())),
            }),
        );
    }
    Ok(finish(checks))
}

fn counts(v: &[BigInt]) -> String {
    format!(
        "[{}]",
        v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    )
}
