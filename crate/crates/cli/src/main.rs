//! `commprob`: commuting probabilities and theorem checks from the shell.
//!
//! Every subcommand prints one JSON report (see `docs/formats.md`) and
//! exits 0 on success, 1 on a failed assertion, 2 on bad input, 3 when a
//! budget is exceeded and 4 when a suite's hypothesis does not hold.

mod report;
mod scan;
mod verify;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use commprob::catalog::GroupExpr;
use commprob::engine::{p_r, Method};
use commprob::group::load_group_file;
use commprob::symplectic::{identify_heisenberg, rank1_identify};
use commprob::{ExactRational, FiniteGroup};

use report::{exit_code, Failure, Report, ResultEntry, EXIT_ASSERTION, EXIT_HYPOTHESIS};
use verify::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "commprob",
    version,
    about = "Exact commuting probabilities of finite groups"
)]
struct Cli {
    /// Print a timestamp to stderr; the report itself stays deterministic.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProbFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanFormat {
    #[value(alias = "rows-structured")]
    Rows,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// P_r and κ_{r-1} for r = 2..rmax.
    Prob {
        /// `file:<path>` or a catalog spec such as `dihedral:n=4`.
        group: String,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
        /// bruteforce, kappa or class-formula.
        #[arg(long, default_value = "kappa")]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        format: ProbFormat,
    },
    /// Run a theorem validator suite on one group.
    Verify {
        group: String,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest r checked; each suite has its own default.
        #[arg(long)]
        rmax: Option<u32>,
        /// Report an unmet hypothesis as a skip with exit 0.
        #[arg(long)]
        allow_skip: bool,
    },
    /// Tabulate P_r over a parameter grid of one family.
    Scan {
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
        #[arg(long, value_enum, default_value = "rows")]
        format: ScanFormat,
        /// Write the table here instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Recover (q, n) or n from exact probabilities.
    Identify {
        #[arg(long)]
        p2: String,
        #[arg(long)]
        p3: Option<String>,
        /// `heisenberg` or `rank1:<p>`.
        #[arg(long, default_value = "heisenberg")]
        mode: String,
    },
}

fn load_group(source: &str) -> Result<FiniteGroup, Failure> {
    let g = match source.strip_prefix("file:") {
        Some(path) => load_group_file(path)?,
        None => source.parse::<GroupExpr>()?.build()?,
    };
    Ok(g)
}

fn parse_rational(flag: &str, text: &str) -> Result<ExactRational, Failure> {
    text.parse()
        .map_err(|e| Failure::input(format!("--{flag}: {e}")))
}

fn cmd_prob(group: &str, rmax: u32, method: Method, rep: &mut Report) -> Result<(), Failure> {
    if rmax < 2 {
        return Err(Failure::input("--rmax must be at least 2"));
    }
    let g = load_group(group)?;
    for r in 2..=rmax {
        let res = p_r(&g, r, method)?;
        rep.results
            .push(ResultEntry::new(format!("P_{r}"), res.p_r));
        rep.results.push(ResultEntry::integer(
            format!("kappa_{}", r - 1),
            res.kappa_prev,
        ));
    }
    rep.set_group(group, &g);
    Ok(())
}

fn cmd_verify(
    group: &str,
    suite: Suite,
    rmax: Option<u32>,
    allow_skip: bool,
    rep: &mut Report,
) -> Result<(), Failure> {
    let g = load_group(group)?;
    rep.set_group(group, &g);
    let rmax = rmax.unwrap_or(suite.default_rmax());
    if rmax < 2 {
        return Err(Failure::input("--rmax must be at least 2"));
    }
    match verify::run(suite, &g, rmax, rep) {
        Ok(()) => Ok(()),
        Err(e) if allow_skip && exit_code(&e) == EXIT_HYPOTHESIS => {
            rep.warnings.push(format!("skipped: {e}"));
            rep.summary = Some("skipped".into());
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_identify(p2: &str, p3: Option<&str>, mode: &str, rep: &mut Report) -> Result<(), Failure> {
    let p2 = parse_rational("p2", p2)?;
    rep.results.push(ResultEntry::new("P_2", p2.clone()));
    if mode == "heisenberg" {
        let p3 = parse_rational(
            "p3",
            p3.ok_or_else(|| Failure::input("heisenberg mode needs --p3"))?,
        )?;
        rep.results.push(ResultEntry::new("P_3", p3.clone()));
        rep.summary = Some(match identify_heisenberg(&p2, &p3) {
            Some((q, n)) => {
                rep.results.push(ResultEntry::integer("q", q));
                rep.results.push(ResultEntry::integer("n", n));
                format!("q={q}, n={n}")
            }
            None => "no match".into(),
        });
        return Ok(());
    }
    let p: u64 = mode
        .strip_prefix("rank1:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            Failure::input(format!(
                "unknown mode {mode:?}; use heisenberg or rank1:<p>"
            ))
        })?;
    if !commprob::numtheory::is_prime(p) {
        return Err(Failure::input(format!("rank1:{p}: {p} is not prime")));
    }
    rep.summary = Some(match rank1_identify(p, &p2)? {
        Some(n) => {
            rep.results.push(ResultEntry::integer("n", n));
            format!("n={n}")
        }
        None => "no match".into(),
    });
    Ok(())
}

/// Writes the scan table and returns the report printed on stdout, if any.
#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    family: &str,
    ranges: BTreeMap<String, Vec<i64>>,
    rmax: u32,
    format: ScanFormat,
    output: Option<&std::path::Path>,
    mut rep: Report,
) -> Result<Option<Report>, Failure> {
    if rmax < 2 {
        return Err(Failure::input("--rmax must be at least 2"));
    }
    let specs = scan::expand(family, &ranges)?;
    let rows = scan::scan(family, &specs, rmax);
    for (i, row) in rows.iter().enumerate() {
        if let Some(e) = &row.error {
            rep.warnings.push(format!("row {i} ({}): {e}", row.spec));
        }
        if row.agree == Some(false) {
            rep.warnings.push(format!(
                "row {i} ({}): closed form disagrees with engine",
                row.spec
            ));
        }
    }
    rep.summary = Some(format!("{} rows", rows.len()));
    let table = match format {
        ScanFormat::Csv => Some(scan::to_csv(&rows, rmax)),
        ScanFormat::Rows => None,
    };
    rep.rows = Some(rows);
    let body = table.unwrap_or_else(|| rep.to_json());
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    match output {
        Some(path) => {
            std::fs::write(path, body)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            rep.rows = None;
            Ok(Some(rep))
        }
        None => {
            emit(&body);
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.stamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        eprintln!("stamp: unix {secs}");
    }
    let args: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| a != "--stamp")
        .collect();
    let name = match &cli.cmd {
        Cmd::Prob { .. } => "prob",
        Cmd::Verify { .. } => "verify",
        Cmd::Scan { .. } => "scan",
        Cmd::Identify { .. } => "identify",
    };
    let mut rep = Report::new(name, args);
    let outcome = match cli.cmd {
        Cmd::Prob {
            group,
            rmax,
            method,
            format,
        } => cmd_prob(&group, rmax, method, &mut rep).map(|()| {
            if let ProbFormat::Table = format {
                print_table(&rep);
                None
            } else {
                Some(rep)
            }
        }),
        Cmd::Verify {
            group,
            suite,
            rmax,
            allow_skip,
        } => cmd_verify(&group, suite, rmax, allow_skip, &mut rep).map(|()| Some(rep)),
        Cmd::Identify { p2, p3, mode } => {
            cmd_identify(&p2, p3.as_deref(), &mode, &mut rep).map(|()| Some(rep))
        }
        Cmd::Scan {
            family,
            n,
            q,
            p,
            m,
            a,
            u,
            d,
            e,
            k,
            rmax,
            format,
            output,
        } => {
            let mut ranges = BTreeMap::new();
            let given = [
                ("n", n),
                ("q", q),
                ("p", p),
                ("m", m),
                ("a", a),
                ("u", u),
                ("d", d),
                ("e", e),
                ("k", k),
            ];
            let parsed: Result<(), Failure> = given.into_iter().try_for_each(|(key, v)| {
                if let Some(v) = v {
                    ranges.insert(key.to_string(), scan::parse_range(&v)?);
                }
                Ok(())
            });
            parsed.and_then(|()| cmd_scan(&family, ranges, rmax, format, output.as_deref(), rep))
        }
    };
    match outcome {
        Ok(Some(rep)) => {
            emit(&(rep.to_json() + "\n"));
            if rep.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION as u8)
            }
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

/// Stdout writes that tolerate a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print_table(rep: &Report) {
    let group = rep.group.as_ref().map(|g| g.name.as_str()).unwrap_or("");
    println!("# {group}");
    println!("{:<12} {:<28} decimal", "label", "exact");
    for r in &rep.results {
        let exact = match r.value.to_integer() {
            Some(n) => n.to_string(),
            None => r.value.to_string(),
        };
        println!("{:<12} {:<28} {}", r.label, exact, r.display_decimal);
    }
}
