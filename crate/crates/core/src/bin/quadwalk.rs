//! Command-line front end. Model files use the JSON input format of
//! `classify::parse_input`; `-` reads from stdin.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadwalk_core::algebra::Pretty;
use quadwalk_core::classify::{classify, parse_input, run_corpus, BoundOverflow, Bounds, ModelInput, MAX_SERIES_ORDER};
use quadwalk_core::curve::{base_points, genus};
use quadwalk_core::decouple::{decouple_xy, normalize_certificate, DecouplingOutcome, DenominatorMode, SearchBounds};
use quadwalk_core::enumerate::{counting_series, guess_algebraic, guess_ode, verify_feq, OVERDETERMINATION};
use quadwalk_core::group::group_report;
use quadwalk_core::model::{build_kernel, WeightedModel};

#[derive(Parser)]
#[command(name = "quadwalk", version, about = "Classify weighted small-step quarter-plane walks")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; no computation depends on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Degree cap for exactly composed plane iterates.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full report and verdict.
    Classify { model: String },
    /// Genus of the kernel curve.
    Genus { model: String },
    /// Order of theta on the plane and on the curve.
    Group {
        model: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Search for xy = f(x) + g(y) + K h.
    Decouple {
        model: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Disc)]
        mode: Mode,
    },
    /// Base points of the kernel curve.
    Basepoints { model: String },
    /// Coefficients of Q(1,1;t) and Q(0,0;t).
    Enumerate {
        model: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Check the kernel functional equation on the truncated series.
    VerifyFeq {
        model: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Guess a linear ODE or an algebraic equation.
    Guess {
        model: String,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 100)]
        terms: usize,
        /// ODE order or degree in Y.
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Degree in t of the coefficients; derived from the terms if absent.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Classify all 255 nonempty unweighted step sets.
    Corpus {
        /// Include one row per model.
        #[arg(long)]
        entries: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Laurent,
    Disc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Q00,
    Q11,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ode,
    Algebraic,
}

enum Failure {
    Input(String),
    Bound(String),
}

impl From<BoundOverflow> for Failure {
    fn from(e: BoundOverflow) -> Self {
        Failure::Bound(e.to_string())
    }
}

fn load(path: &str) -> Result<ModelInput, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    parse_input(&text).map_err(|e| Failure::Input(e.to_string()))
}

fn model_of(input: &ModelInput) -> WeightedModel {
    input.model().expect("validated by parse_input")
}

fn terms_cap(n: usize) -> Result<(), Failure> {
    if n > MAX_SERIES_ORDER {
        return Err(Failure::Bound(format!("terms = {n} exceeds the cap {MAX_SERIES_ORDER}")));
    }
    Ok(())
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    let out = if json {
        serde_json::to_string_pretty(value).expect("reports serialize")
    } else {
        text()
    };
    // a closed pipe is not an error for a report printer
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    let with_cap = |mut b: Bounds| {
        if let Some(d) = cli.max_degree {
            b.max_degree = d;
        }
        b
    };
    match cli.cmd {
        Cmd::Classify { model } => {
            let input = load(&model)?;
            let bounds = with_cap(input.bounds);
            bounds.check()?;
            let r = classify(&model_of(&input), bounds);
            emit(json, &r, || {
                let v = &r.verdict;
                let mut out = format!("{:?} ({:?})\n", v.outcome, v.certainty);
                for e in &v.evidence {
                    out += &format!("  - {}\n      [{}]\n", e.fact, e.citation);
                }
                if let Some(c) = &v.caveat {
                    out += &format!("  caveat: {c}\n");
                }
                out.trim_end().to_string()
            });
        }
        Cmd::Genus { model } => {
            let input = load(&model)?;
            let k = build_kernel(&model_of(&input));
            let g = genus(&k).map_err(|e| Failure::Input(e.to_string()))?;
            emit(json, &g, || format!("genus {:?}\n  {}", g.genus, g.witness));
        }
        Cmd::Group { model, bound } => {
            let input = load(&model)?;
            let mut bounds = with_cap(input.bounds);
            if let Some(n) = bound {
                bounds.group_n = n;
            }
            bounds.check()?;
            let k = build_kernel(&model_of(&input));
            let r = group_report(&k, bounds.group_n, bounds.max_degree);
            emit(json, &r, || {
                format!(
                    "plane: {:?}\ncurve: {:?}\ngroup order: {}\ntheta: {}\n  {}",
                    r.order_plane,
                    r.order_curve,
                    r.group_order.map_or("not found".into(), |n| n.to_string()),
                    r.theta,
                    r.certificate
                )
            });
        }
        Cmd::Decouple { model, degree, mode } => {
            let input = load(&model)?;
            let mut bounds = input.bounds;
            if let Some(d) = degree {
                bounds.decouple_degree = d;
            }
            bounds.check()?;
            let mode = match mode {
                Mode::Laurent => DenominatorMode::LaurentOnly,
                Mode::Disc => DenominatorMode::DiscriminantFactors,
            };
            let k = build_kernel(&model_of(&input));
            let out = match decouple_xy(&k, SearchBounds::new(bounds.decouple_degree, mode)) {
                DecouplingOutcome::Found(c) => DecouplingOutcome::Found(normalize_certificate(&c)),
                none => none,
            };
            emit(json, &out, || match &out {
                DecouplingOutcome::Found(c) => format!(
                    "f = {}\ng = {}\nh = {}",
                    c.f.pretty(&["x", "t"]),
                    c.g.pretty(&["y", "t"]),
                    c.h.pretty(&["y", "x", "t"])
                ),
                DecouplingOutcome::NoneUpToBounds(b) => format!("no decoupling up to {b:?}"),
            });
        }
        Cmd::Basepoints { model } => {
            let input = load(&model)?;
            let k = build_kernel(&model_of(&input));
            let pts = base_points(&k).map_err(|e| Failure::Input(e.to_string()))?;
            emit(json, &pts, || {
                pts.iter()
                    .map(|p| serde_json::to_string(p).expect("points serialize"))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
        Cmd::Enumerate { model, terms } => {
            terms_cap(terms)?;
            let input = load(&model)?;
            let s = counting_series(&model_of(&input), terms.saturating_sub(1));
            #[derive(Serialize)]
            struct Out<'a> {
                q11: &'a quadwalk_core::enumerate::TruncSeries,
                q00: &'a quadwalk_core::enumerate::TruncSeries,
            }
            let out = Out { q11: &s.q11, q00: &s.q00 };
            emit(json, &out, || {
                let row = |v: &quadwalk_core::enumerate::TruncSeries| {
                    v.coeffs()
                        .iter()
                        .map(quadwalk_core::algebra::format_rational)
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                format!("Q(1,1): {}\nQ(0,0): {}", row(&s.q11), row(&s.q00))
            });
        }
        Cmd::VerifyFeq { model, terms } => {
            terms_cap(terms)?;
            let input = load(&model)?;
            let r = verify_feq(&model_of(&input), terms);
            emit(json, &r, || {
                if r.holds() {
                    format!("K Q = xy + F1 + F2 holds mod t^{}", r.order)
                } else {
                    format!("residual: first nonzero term {:?}", r.first_nonzero)
                }
            });
        }
        Cmd::Guess {
            model,
            target,
            kind,
            terms,
            order,
            degree,
        } => {
            terms_cap(terms)?;
            let input = load(&model)?;
            let s = counting_series(&model_of(&input), terms.saturating_sub(1));
            let series = match target {
                Target::Q00 => &s.q00,
                Target::Q11 => &s.q11,
            };
            let degree = degree.unwrap_or_else(|| (terms.saturating_sub(OVERDETERMINATION) / 4).saturating_sub(1));
            let r = match kind {
                Kind::Ode => guess_ode(series, order, degree),
                Kind::Algebraic => guess_algebraic(series, order, degree),
            }
            .map_err(|e| Failure::Input(e.to_string()))?;
            emit(json, &r, || r.pretty());
        }
        Cmd::Corpus { entries } => {
            let bounds = with_cap(Bounds {
                series_order: 0,
                ..Bounds::default()
            });
            bounds.check()?;
            let mut s = run_corpus(bounds);
            if !entries {
                s.entries.clear();
            }
            emit(json, &s, || {
                let mut out = format!(
                    "models {}\nnondegenerate {} ({} up to transposition)\nfinite group {} ({} up to transposition)\nerrors {}\n",
                    s.models, s.nondegenerate, s.nondegenerate_orbits, s.finite_group, s.finite_group_orbits, s.errors
                );
                for (name, map) in [("outcome", &s.by_outcome), ("genus", &s.by_genus), ("group order", &s.by_group_order)] {
                    out += &format!("by {name}:\n");
                    for (k, v) in map {
                        out += &format!("  {k}: {v}\n");
                    }
                }
                for e in &s.entries {
                    out += &format!(
                        "{:3} {} {}\n",
                        e.mask,
                        e.steps,
                        e.outcome.map_or_else(|| e.error.clone().unwrap_or_default(), |o| format!("{o:?}"))
                    );
                }
                out.trim_end().to_string()
            });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
