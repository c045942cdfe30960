use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fakeoct::families::{self, connection_labels, systole_closed_form};
use fakeoct::io::{load_surface, save_surface};
use fakeoct::octagon::{self, build_complex, extract_normal_form, horizontals, normal_form, verify_fake};
use fakeoct::render::render_svg;
use fakeoct::search::{systole_with, SearchOptions};
use fakeoct::surgery::{twin_on_side, Side};
use fakeoct::FlatComplex;

/// Fake regular octagons: build, iterate, verify and draw them.
#[derive(Parser)]
#[command(name = "fakeoct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to a file instead of stdout.
    #[arg(short = 'o', global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the strip complex of Oct_n as JSON.
    Gen {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Run n surgeries from the octagon and compare with the closed form.
    Iterate {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Write one JSON record per surgery step.
        #[arg(long, value_name = "PATH")]
        trace_out: Option<PathBuf>,
    },
    /// Systole of Oct_n (closed form checked by search) or of a surface file.
    Systole {
        #[arg(allow_negative_numbers = true)]
        target: String,
    },
    /// Check a surface file ("-" for stdin) against the fake octagon invariants.
    Verify { file: String },
    /// Invariant table for n in [a, b].
    Table {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        /// Comma-separated output.
        #[arg(long)]
        csv: bool,
    },
    /// Indices sharing the systole length of Oct_n, with a brute-force check.
    Partners {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Brute force over [-max-n, max-n].
        #[arg(long, default_value_t = 100)]
        max_n: i64,
    },
    /// Search for Oct_n close to Oct_m.
    Approx {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        eps_pos: Option<f64>,
        n_pos: Option<i64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        max_n: Option<i64>,
    },
    /// Draw a surface (file or index) as SVG.
    Render {
        #[arg(allow_negative_numbers = true)]
        target: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure { code, message: message.to_string() }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| fail(1, format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| fail(1, format!("reading {path}: {e}")))
    }
}

fn load(path: &str) -> Result<FlatComplex, Failure> {
    load_surface(&read_input(path)?).map_err(|e| fail(1, e))
}

/// A target is an index when it parses as one, a file otherwise.
fn surface_of(target: &str) -> Result<(FlatComplex, Option<i64>), Failure> {
    match target.parse::<i64>() {
        Ok(n) => Ok((build_complex(&normal_form(n)).map_err(|e| fail(1, e))?, Some(n))),
        Err(_) => Ok((load(target)?, None)),
    }
}

fn search_options() -> Result<SearchOptions, Failure> {
    match std::env::var("OCT_SEARCH_BUDGET") {
        Ok(v) => {
            let b = v
                .trim()
                .parse::<usize>()
                .map_err(|_| fail(2, format!("OCT_SEARCH_BUDGET must be a count, got {v:?}")))?;
            Ok(SearchOptions { budget: Some(b) })
        }
        Err(_) => Ok(SearchOptions::default()),
    }
}

fn f64s(x: &fakeoct::QSqrt2) -> String {
    format!("{:.12}", x.to_f64().unwrap_or(f64::NAN))
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Gen { n } => {
            let c = build_complex(&normal_form(*n)).map_err(|e| fail(1, e))?;
            let s = save_surface(&c);
            let v: Value = serde_json::from_str(&s).map_err(|e| fail(1, e))?;
            Ok(Output { text: s, json: v, ok: true })
        }
        Command::Iterate { n, trace_out } => {
            let side = if *n >= 0 { Side::Left } else { Side::Right };
            let mut c = octagon::octagon0();
            let mut records = Vec::new();
            for step in 1..=n.unsigned_abs() {
                c = octagon::surgery_step(&c, side).map_err(|e| fail(1, e))?;
                if trace_out.is_some() {
                    let pos = extract_normal_form(&c).map_err(|e| fail(1, e))?;
                    let k = if *n >= 0 { step as i64 } else { -(step as i64) };
                    records.push(
                        json!({"step": k, "P": pos.p.to_string(), "Pp": pos.pp.to_string(), "faces": c.faces.len()}),
                    );
                }
            }
            if let Some(path) = trace_out {
                let body = records.iter().map(|r| r.to_string() + "\n").collect::<String>();
                fs::write(path, body).map_err(|e| fail(1, format!("writing {}: {e}", path.display())))?;
            }
            let pos = extract_normal_form(&c).map_err(|e| fail(1, e))?;
            let expect = normal_form(*n);
            let matched = pos == expect.positions();
            let json = json!({"n": n, "P": pos.p.to_string(), "Pp": pos.pp.to_string(), "oracle_match": matched});
            let text = format!(
                "n = {n}\nP  = {} ({})\nP' = {} ({})\nclosed form P = {}, P' = {}\noracle match: {matched}\n",
                pos.p,
                f64s(&pos.p),
                pos.pp,
                f64s(&pos.pp),
                expect.p,
                expect.pp
            );
            Ok(Output { text, json, ok: matched })
        }
        Command::Systole { target } => {
            let (c, n) = surface_of(target)?;
            let opts = search_options()?;
            let (sq, sys) = systole_with(&c, &opts).map_err(|e| fail(1, e))?;
            let mut labels: Vec<(String, String)> = sys.iter().filter_map(|s| connection_labels(&c, s)).collect();
            labels.sort();
            let mut json = json!({
                "sq_len": sq.to_string(),
                "sq_len_f64": f64s(&sq),
                "count": sys.len(),
                "endpoints": labels,
            });
            let mut text = format!("systole² = {sq} ({})\ncount = {}\n", f64s(&sq), sys.len());
            for (a, b) in &labels {
                text.push_str(&format!("  {a} - {b}\n"));
            }
            let mut ok = true;
            if let Some(n) = n {
                let cf = systole_closed_form(n).map_err(|e| fail(1, e))?;
                let mut want = cf.endpoints.clone();
                want.sort();
                let matched = cf.sq_len == sq && cf.count == sys.len() && (n == 0 || want == labels);
                ok = matched;
                json["n"] = json!(n);
                json["family"] = json!(cf.family);
                json["closed_form_match"] = json!(matched);
                let fam = cf.family.map_or("octagon".to_string(), |f| f.to_string());
                text = format!("n = {n}\nfamily = {fam}\n{text}closed form match: {matched}\n");
            }
            Ok(Output { text, json, ok })
        }
        Command::Verify { file } => {
            let c = load(file)?;
            let r = verify_fake(&c);
            let json = serde_json::to_value(&r).map_err(|e| fail(1, e))?;
            let nf = r.normal_form.as_ref().map_or("-".to_string(), |p| format!("P = {}, P' = {}", p.p, p.pp));
            let text = format!(
                "valid: {}\nsingle cone point of order 2: {}\ngenus 2: {}\narea 2+2√2: {}\noctagon periods: {}\nnormal form: {nf}\nfake: {}\n",
                r.valid, r.single_cone_point, r.genus_two, r.area_matches, r.periods_match, r.is_fake
            );
            Ok(Output { text, ok: r.invariants_hold(), json })
        }
        Command::Table { a, b, csv } => {
            if a > b {
                return Err(fail(2, format!("empty range [{a}, {b}]")));
            }
            let rows = families::table_rows(*a, *b).map_err(|e| fail(1, e))?;
            let text = if *csv { families::table_csv(&rows) } else { families::table_text(&rows) };
            let json = serde_json::to_value(&rows).map_err(|e| fail(1, e))?;
            Ok(Output { text, json, ok: true })
        }
        Command::Partners { n, max_n } => {
            if *n == 0 {
                return Err(fail(2, "partners is defined for n ≠ 0"));
            }
            let set = families::same_systole_partners(*n).map_err(|e| fail(1, e))?;
            let brute = families::brute_force_partners(*n, -max_n..=*max_n).map_err(|e| fail(1, e))?;
            let inside: std::collections::BTreeSet<i64> = set.iter().copied().filter(|m| m.abs() <= *max_n).collect();
            let matched = inside == brute;
            let json = json!({"n": n, "partners": set, "brute_force": brute, "window": max_n, "match": matched});
            let list =
                |s: &std::collections::BTreeSet<i64>| s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ");
            let text = format!(
                "n = {n}\npartners: {{{}}}\nbrute force over [-{max_n}, {max_n}]: {{{}}}\nmatch: {matched}\n",
                list(&set),
                list(&brute)
            );
            Ok(Output { text, json, ok: matched })
        }
        Command::Approx { m, eps_pos, n_pos, eps, max_n } => {
            let eps = eps.or(*eps_pos).unwrap_or(0.01);
            let limit = max_n.or(*n_pos).unwrap_or(100_000);
            if eps.is_nan() || eps <= 0.0 || limit < 1 {
                return Err(fail(2, "need eps > 0 and N >= 1"));
            }
            let a = families::approximate(*m, eps, limit);
            let json = json!({
                "m": a.m, "n": a.n, "dist": a.dist, "dist_exact": a.dist_exact.to_string(),
                "reached": a.reached, "relation_exact": families::density_relation_holds(),
            });
            let flag = if a.reached { "" } else { " (not reached, best found)" };
            let text = format!("m = {m}\nn = {}\ndistance = {} ({:.12}){flag}\n", a.n, a.dist_exact, a.dist);
            Ok(Output { text, json, ok: true })
        }
        Command::Render { target } => {
            let (c, _) = surface_of(target)?;
            let cuts = match horizontals(&c) {
                Ok(hz) => {
                    let twin = twin_on_side(&c, &hz.gamma, Side::Left).map_err(|e| fail(1, e))?;
                    vec![hz.gamma, twin]
                }
                Err(_) => Vec::new(),
            };
            let svg = render_svg(&c, &cuts);
            Ok(Output { json: json!({"svg": svg}), text: svg, ok: true })
        }
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| fail(1, format!("writing {}: {e}", path.display()))),
        None => io::stdout().write_all(body.as_bytes()).map_err(|e| fail(1, e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let body = if cli.json { out.json.to_string() + "\n" } else { out.text };
        emit(&cli, &body)?;
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.message}));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
