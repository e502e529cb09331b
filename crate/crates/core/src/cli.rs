//! Command-line front end: `run` maps argv to an exit code and the text to print.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bigraded::{BigradedSpace, LaurentPoly};
use crate::diagram::{admissible_patterns, torus2_diagram, LinkDiagram};
use crate::formula::{assemble, orientation_pattern, Orientation, PretzelSpec};
use crate::jones::{kauffman_jones, pretzel_ll0_jones, torus2_jones};
use crate::khcube::{complex_stats, homology_with, Engine, KhConfig};
use crate::verify::{run_suite, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pretzel-kh",
    version,
    about = "Rational Khovanov homology of pretzel links P(-l,m,n)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form homology of P(-l,m,n), 2 ≤ l ≤ m
    Formula {
        #[command(flatten)]
        lmn: Lmn,
        #[arg(long, default_value = "poincare")]
        format: Format,
    },
    /// Homology computed from a diagram
    Oracle {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value = "poincare")]
        format: Format,
        /// also print complex statistics as JSON
        #[arg(long)]
        stats: bool,
    },
    /// Compare the closed form with the oracle; exit 0 iff equal
    Compare {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        pretzel: (i64, i64, i64),
        #[arg(long)]
        orient: Option<Orientation>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Unnormalized Jones polynomial
    Jones {
        #[command(flatten)]
        input: Input,
        /// positive torus link T(2,L)
        #[arg(long, conflicts_with_all = ["pretzel", "pd"])]
        torus: Option<i64>,
        /// skip closed forms and always use the state sum
        #[arg(long)]
        kauffman: bool,
    },
    /// Run a verification suite and print a JSON-lines report
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long)]
        max: i64,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Render the t/q grid of the closed form (or the oracle with --oracle)
    Grid {
        #[command(flatten)]
        lmn: Lmn,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Args, Debug)]
struct Lmn {
    #[arg(short, allow_negative_numbers = true)]
    l: i64,
    #[arg(short, allow_negative_numbers = true)]
    m: i64,
    #[arg(short, allow_negative_numbers = true)]
    n: i64,
    #[arg(long)]
    orient: Option<Orientation>,
}

#[derive(Args, Debug)]
struct Input {
    /// L,M,N for P(-L,M,N)
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pretzel: Option<(i64, i64, i64)>,
    /// PD JSON file
    #[arg(long, conflicts_with = "pretzel")]
    pd: Option<PathBuf>,
    #[arg(long, conflicts_with = "pd")]
    orient: Option<Orientation>,
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, default_value = "scan")]
    engine: EngineName,
    #[arg(long)]
    max_crossings: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Poincare,
    Json,
    Grid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineName {
    Scan,
    Cube,
}

impl EngineArgs {
    fn config(&self) -> KhConfig {
        let mut cfg = KhConfig {
            engine: match self.engine {
                EngineName::Scan => Engine::Scan,
                EngineName::Cube => Engine::Cube,
            },
            ..KhConfig::default()
        };
        if let Some(k) = self.max_crossings {
            cfg.max_crossings = k;
        }
        cfg
    }
}

fn parse_triple(s: &str) -> Result<(i64, i64, i64), String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected L,M,N, got `{s}`")),
    }
}

/// Outcome of a command that did not succeed: exit code and message.
type Fail = (i32, String);

fn usage(e: impl ToString) -> Fail {
    (EXIT_USAGE, e.to_string())
}

fn failure(e: impl ToString) -> Fail {
    (EXIT_FAIL, e.to_string())
}

/// The default pattern when admissible, else the first admissible one; an explicit
/// override must be admissible.
fn pretzel_spec(l: i64, m: i64, n: i64, orient: Option<Orientation>) -> Result<PretzelSpec, Fail> {
    let adm = admissible_patterns(-l, m, n);
    let pattern = match orient {
        Some(p) if adm.contains(&p) => p,
        Some(p) => {
            return Err(usage(format!(
                "orientation {p} is not admissible for P(-{l},{m},{n}); admissible: {adm:?}"
            )))
        }
        None => {
            let d = orientation_pattern(l, m, n);
            if adm.contains(&d) {
                d
            } else {
                *adm.first()
                    .ok_or_else(|| usage("no admissible orientation"))?
            }
        }
    };
    Ok(PretzelSpec::with_pattern(l, m, n, pattern))
}

fn read_diagram(input: &Input) -> Result<(String, LinkDiagram, Option<PretzelSpec>), Fail> {
    match (&input.pretzel, &input.pd) {
        (&Some((l, m, n)), None) => {
            let s = pretzel_spec(l, m, n, input.orient)?;
            Ok((s.to_string(), s.diagram().map_err(usage)?, Some(s)))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok((
                path.display().to_string(),
                LinkDiagram::from_json(&text).map_err(usage)?,
                None,
            ))
        }
        _ => Err(usage("exactly one of --pretzel or --pd is required")),
    }
}

fn render(v: &BigradedSpace, f: Format) -> String {
    match f {
        Format::Poincare => v.to_string(),
        Format::Json => v.to_json(),
        Format::Grid => render_grid(v),
    }
}

/// Text grid: one row per q (descending, step 2 when all q share a parity), one column per t.
pub fn render_grid(v: &BigradedSpace) -> String {
    let Some((t0, t1)) = v.t_range() else {
        return String::from("(empty)");
    };
    let qs: Vec<i32> = v.iter().map(|((_, q), _)| q).collect();
    let (q0, q1) = (*qs.iter().min().unwrap(), *qs.iter().max().unwrap());
    let step = if qs.iter().all(|q| (q - q0).rem_euclid(2) == 0) {
        2
    } else {
        1
    };
    let cells: Vec<String> = v.iter().map(|(_, d)| d.to_string()).collect();
    let w = cells
        .iter()
        .map(String::len)
        .chain([t0.to_string().len(), t1.to_string().len()])
        .max()
        .unwrap_or(1);
    let qw = q0.to_string().len().max(q1.to_string().len()).max(3);
    let mut out = format!("{:>qw$} |", "q\\t");
    for t in t0..=t1 {
        out += &format!(" {t:>w$}");
    }
    out.push('\n');
    let mut q = q1;
    while q >= q0 {
        let mut row = format!("{q:>qw$} |");
        for t in t0..=t1 {
            let d = v.dim(t, q);
            let c = if d == 0 { String::new() } else { d.to_string() };
            row += &format!(" {c:>w$}");
        }
        out += row.trim_end();
        out.push('\n');
        q -= step;
    }
    out.pop();
    out
}

fn jones_of(input: &Input, torus: Option<i64>, kauffman: bool) -> Result<LaurentPoly, Fail> {
    if let Some(l) = torus {
        if l < 2 {
            return Err(usage("l must be ≥ 2"));
        }
        if !kauffman {
            return Ok(&torus2_jones(l).map_err(usage)? * &LaurentPoly::circle());
        }
        return Ok(kauffman_jones(&torus2_diagram(l as usize))
            .map_err(usage)?
            .unnormalized);
    }
    let (_, d, spec) = read_diagram(input)?;
    if let Some(s) = spec {
        if !kauffman
            && s.l == s.m
            && s.n == 0
            && matches!(s.pattern, Orientation::LR | Orientation::RL)
        {
            return pretzel_ll0_jones(s.l, s.pattern).map_err(usage);
        }
    }
    Ok(kauffman_jones(&d).map_err(usage)?.unnormalized)
}

fn dispatch(cli: Cli) -> Result<(i32, String), Fail> {
    match cli.cmd {
        Cmd::Formula { lmn, format } => {
            let spec = formula_spec(&lmn)?;
            Ok((EXIT_OK, render(&assemble(&spec).map_err(usage)?, format)))
        }
        Cmd::Oracle {
            input,
            engine,
            format,
            stats,
        } => {
            let (_, d, _) = read_diagram(&input)?;
            let v = homology_with(&d, &engine.config()).map_err(usage)?;
            let mut out = render(&v, format);
            if stats {
                out += "\n";
                out += &serde_json::to_string(&complex_stats(&d)).map_err(failure)?;
            }
            Ok((EXIT_OK, out))
        }
        Cmd::Compare {
            pretzel: (l, m, n),
            orient,
            engine,
        } => {
            let s = pretzel_spec(l, m, n, orient)?;
            let f = assemble(&s).map_err(usage)?;
            let o = homology_with(&s.diagram().map_err(usage)?, &engine.config()).map_err(usage)?;
            if f == o {
                Ok((EXIT_OK, format!("{s}: equal\n{f}")))
            } else {
                Ok((
                    EXIT_FAIL,
                    format!("{s}: MISMATCH\nformula: {f}\noracle:  {o}"),
                ))
            }
        }
        Cmd::Jones {
            input,
            torus,
            kauffman,
        } => Ok((EXIT_OK, jones_of(&input, torus, kauffman)?.to_string())),
        Cmd::Verify { suite, max, engine } => {
            let recs = run_suite(&suite, max, &engine.config())
                .ok_or_else(|| usage(format!("unknown suite {suite}")))?;
            let code = if recs.iter().all(|r| r.pass) {
                EXIT_OK
            } else {
                EXIT_FAIL
            };
            let lines: Vec<String> = recs
                .iter()
                .map(serde_json::to_string)
                .collect::<Result<_, _>>()
                .map_err(failure)?;
            Ok((code, lines.join("\n")))
        }
        Cmd::Grid { lmn, oracle } => {
            let spec = formula_spec(&lmn)?;
            let v = if oracle {
                homology_with(&spec.diagram().map_err(usage)?, &KhConfig::default())
                    .map_err(usage)?
            } else {
                assemble(&spec).map_err(usage)?
            };
            Ok((EXIT_OK, render_grid(&v)))
        }
    }
}

fn formula_spec(lmn: &Lmn) -> Result<PretzelSpec, Fail> {
    if lmn.l < 2 {
        return Err(usage(format!("l must be ≥ 2 (got {})", lmn.l)));
    }
    pretzel_spec(lmn.l, lmn.m, lmn.n, lmn.orient)
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once("pretzel-kh".into()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli) {
        Ok(r) | Err(r) => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_json_has_sixteen_generators() {
        let (code, out) = run([
            "formula", "-l", "3", "-m", "5", "-n", "7", "--format", "json",
        ]);
        assert_eq!(code, 0);
        let v = BigradedSpace::from_json(&out).unwrap();
        assert_eq!(v.total_dim(), 16);
        assert_eq!(v.to_json(), out);
    }

    #[test]
    fn usage_errors() {
        let (code, out) = run(["formula", "-l", "1", "-m", "2", "-n", "3"]);
        assert_eq!(code, 2);
        assert!(out.contains("l must be ≥ 2"));
        assert_eq!(run(["formula", "-l", "3", "-m", "5"]).0, 2);
        assert_eq!(
            run(["formula", "-l", "3", "-m", "5", "-n", "7", "--bogus"]).0,
            2
        );
        assert_eq!(run(["oracle"]).0, 2);
        assert_eq!(
            run(["formula", "-l", "3", "-m", "4", "-n", "5", "--orient", "RR"]).0,
            2
        );
        assert_eq!(run(["verify", "--suite", "nope", "--max", "3"]).0, 2);
        assert_eq!(run(["--help"]).0, 0);
    }

    #[test]
    fn compare_and_oracle() {
        assert_eq!(run(["compare", "--pretzel", "2,3,3"]).0, 0);
        let (code, out) = run(["oracle", "--pretzel", "-3,3,0"]);
        assert_eq!(code, 0, "{out}");
        let (_, f) = run(["formula", "-l", "2", "-m", "3", "-n", "3"]);
        assert_eq!(run(["oracle", "--pretzel", "2,3,3"]).1, f);
    }

    #[test]
    fn jones_closed_form_and_state_sum() {
        let a = run(["jones", "--pretzel", "3,3,0", "--orient", "LR"]);
        let b = run([
            "jones",
            "--pretzel",
            "3,3,0",
            "--orient",
            "LR",
            "--kauffman",
        ]);
        assert_eq!(a, (0, "-q^-7 + 2*q^-1 + 2*q - q^7".to_string()));
        assert_eq!(a, b);
        assert_eq!(
            run(["jones", "--torus", "3"]),
            run(["jones", "--torus", "3", "--kauffman"])
        );
    }

    #[test]
    fn grid_layout() {
        let v = BigradedSpace::from_terms([((0, 1), 1), ((0, -1), 1)]);
        let g = render_grid(&v);
        let rows: Vec<&str> = g.lines().skip(1).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.ends_with('1')));
        let k = render_grid(&BigradedSpace::from_terms([((0, 0), 1), ((1, 4), 1)]));
        let rows: Vec<&str> = k.lines().skip(1).collect();
        assert_eq!(rows.len(), 3);
        let col = |r: &str| r.rfind('1').unwrap();
        assert!(col(rows[0]) > col(rows[2]));
        assert_eq!(rows[1].trim_end().split('|').nth(1).unwrap().trim(), "");
    }

    #[test]
    fn verify_report_is_sorted_json_lines() {
        let (code, out) = run(["verify", "--suite", "euler", "--max", "4"]);
        assert_eq!(code, 0, "{out}");
        let specs: Vec<serde_json::Value> = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(specs.len(), crate::verify::triples(4, i64::MAX).len());
        assert!(specs
            .iter()
            .all(|r| r["pass"] == true && r["check"] == "euler"));
        assert_eq!(out, run(["verify", "--suite", "euler", "--max", "4"]).1);
    }
}
