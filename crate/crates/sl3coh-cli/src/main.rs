use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sl3coh::dfilt::{d_filtration, d_layer_char, Delta};
use sl3coh::hifilt::{Filtrations, HLayer};
use sl3coh::lattice::classify;
use sl3coh::verify::{self, Suite};
use sl3coh::{Character, Engine, Error, Prime, Weight};

#[derive(Parser)]
#[command(name = "sl3coh", version, about = "Characters of line-bundle cohomology for SL3 in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// The characteristic.
    #[arg(long = "p", global = true, value_parser = parse_prime)]
    prime: Option<Prime>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Args)]
struct WeightArg {
    /// A weight a,b in fundamental-weight coordinates.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_weight)]
    weight: Weight,
}

#[derive(Subcommand)]
enum Command {
    /// Euler characteristic chi(mu) by Weyl's formula.
    Chi(WeightArg),
    /// Character of H^i(mu); all four degrees without --i.
    Coh {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        i: Option<u8>,
    },
    /// Character of the simple module L(lambda).
    Simple(WeightArg),
    /// Region, restricted type, degree and Griffith class of a weight.
    Classify(WeightArg),
    /// D-filtration layers of Zhat(mu).
    Dfilt(WeightArg),
    /// Filtration of H^j(mu) by the D-filtration layers.
    Phifilt {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        j: u8,
    },
    /// p-filtration of H^0(lambda) for dominant lambda.
    Jantzen(WeightArg),
    /// Both filtrations of H^2(n, -n-2).
    Wall {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Image of the boundary map H^1(mu) -> H^2(mu - delta).
    Idelta {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, value_enum)]
        delta: RootArg,
    },
    /// Layer-by-layer account of H^i(m, -n-2) with effaced factors.
    Report {
        #[command(flatten)]
        w: WeightArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        i: u8,
    },
    /// Run a property suite; without --p, over the primes its acceptance scan uses.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Box size; each suite has its own default.
        #[arg(long = "box", value_parser = clap::value_parser!(i64).range(1..))]
        size: Option<i64>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum RootArg {
    Alpha,
    Beta,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let q: i64 = s.trim().parse().map_err(|_| format!("'{s}' is not an integer"))?;
    Prime::new(q).map_err(|_| format!("{q} is not a prime >= 2"))
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok(Weight::new(a, b)),
            _ => Err(format!("'{s}' is not two integers a,b")),
        },
        _ => Err(format!("'{s}' is not of the form a,b")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite '{s}'; expected one of {}", names.join(", "))
    })
}

/// What a command prints, in all three formats.
struct Output {
    json: Value,
    text: String,
    latex: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output serializes")
}

fn character_json(c: &Character) -> Value {
    json!({"dim": c.dim(), "character": to_json(c)})
}

fn character_text(c: &Character) -> String {
    let rows: Vec<_> = c.iter().map(|(w, m)| (w.to_string(), m.to_string())).collect();
    let width = rows.iter().map(|(w, _)| w.len()).max().unwrap_or(0).max("weight".len());
    let mult = rows.iter().map(|(_, m)| m.len()).max().unwrap_or(0).max("mult".len());
    let mut out = format!("{:<width$}  {:>mult$}\n", "weight", "mult");
    for (w, m) in rows {
        writeln!(out, "{w:<width$}  {m:>mult$}").unwrap();
    }
    write!(out, "dim {}", c.dim()).unwrap();
    out
}

fn character_latex(c: &Character) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (w, m)) in c.iter().enumerate() {
        let sign = match (k, m < 0) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        let coeff = if m.abs() == 1 { String::new() } else { m.abs().to_string() };
        write!(out, "{sign}{coeff}e^{{({},{})}}", w.a, w.b).unwrap();
    }
    out
}

fn character_output(c: &Character) -> Output {
    Output { json: character_json(c), text: character_text(c), latex: character_latex(c) }
}

fn layer_label(l: &HLayer) -> String {
    let part = match l.part {
        sl3coh::hifilt::Part::Whole => String::new(),
        part => format!(" {}", to_json(&part).as_str().unwrap_or_default()),
    };
    format!(
        "k={} nu0={} delta={} nu1={}{part} [{}]",
        l.index,
        l.nu0,
        l.e.delta.tag(),
        l.nu1(),
        to_json(&l.status).as_str().unwrap_or_default()
    )
}

fn layers_output(layers: &[HLayer], total: &Character) -> Output {
    let mut text = String::new();
    let mut latex = String::new();
    for l in layers {
        writeln!(text, "{}  dim {}", layer_label(l), l.resolved.dim()).unwrap();
        if let Some(image) = &l.image {
            writeln!(text, "    image dim {}", image.dim()).unwrap();
        }
        writeln!(latex, "% {}\n{} \\\\", layer_label(l), character_latex(&l.resolved)).unwrap();
    }
    write!(text, "total dim {}", total.dim()).unwrap();
    write!(latex, "% total\n{}", character_latex(total)).unwrap();
    Output { json: json!({"layers": to_json(&layers), "total": character_json(total)}), text, latex }
}

fn sum(cs: impl IntoIterator<Item = Character>) -> Result<Character, Error> {
    cs.into_iter().try_fold(Character::zero(), |acc, c| acc.plus(&c))
}

fn need_prime(common: &Common) -> Result<Prime, Failure> {
    common.prime.ok_or_else(|| Failure::Usage("--p <prime> is required for this command".into()))
}

/// Opens the engine, preloading the cache named by SL3COH_CACHE when it was
/// written for the same prime. Returns whether to write the cache back.
fn open_engine(p: Prime) -> (Engine, Option<PathBuf>) {
    let engine = Engine::new(p);
    let Some(path) = std::env::var_os("SL3COH_CACHE").map(PathBuf::from) else {
        return (engine, None);
    };
    if path.exists() {
        if let Err(e) = engine.load_cache(&path) {
            eprintln!("warning: not using cache {}: {e}", path.display());
            return (engine, None);
        }
    }
    (engine, Some(path))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let common = &cli.common;
    if let Command::Chi(w) = &cli.command {
        return Ok(character_output(&sl3coh::charring::chi(w.weight)));
    }
    if let Command::Verify { suite, size } = &cli.command {
        return run_verify(*suite, common.prime, *size);
    }
    let p = need_prime(common)?;
    let (engine, cache) = open_engine(p);
    let f = Filtrations::with_engine(engine);
    let out = compute(&cli.command, &f)?;
    if let Some(path) = cache {
        if let Err(e) = f.engine().save_cache(&path) {
            eprintln!("warning: cache not written: {e}");
        }
    }
    Ok(out)
}

fn compute(command: &Command, f: &Filtrations) -> Result<Output, Failure> {
    let p = f.prime();
    let eng = f.engine();
    Ok(match command {
        Command::Chi(_) | Command::Verify { .. } => unreachable!("handled without an engine"),
        Command::Coh { w, i: Some(i) } => character_output(&eng.coh_char(*i, w.weight)?),
        Command::Coh { w, i: None } => {
            let all = eng.coh_all(w.weight)?;
            let mut text = String::new();
            let mut latex = String::new();
            for (i, h) in all.iter().enumerate() {
                writeln!(text, "H^{i}{}\n{}\n", w.weight, character_text(h)).unwrap();
                writeln!(latex, "% H^{i}{}\n{} \\\\", w.weight, character_latex(h)).unwrap();
            }
            let degrees: Vec<_> = all.iter().map(character_json).collect();
            Output {
                json: json!({"weight": to_json(&w.weight), "degrees": degrees}),
                text: text.trim_end().into(),
                latex: latex.trim_end().into(),
            }
        }
        Command::Simple(w) => {
            if !w.weight.is_dominant() {
                return Err(
                    Error::DomainError(format!("simple modules need a dominant weight, got {}", w.weight)).into()
                );
            }
            character_output(&*eng.simple(w.weight)?)
        }
        Command::Classify(w) => {
            let profile = classify(w.weight, p);
            let json = to_json(&profile);
            let mut text = String::new();
            for (k, v) in json.as_object().expect("profile is an object") {
                writeln!(text, "{k:<16} {v}").unwrap();
            }
            let latex = format!("% {}", serde_json::to_string(&json).unwrap());
            Output { json, text: text.trim_end().into(), latex }
        }
        Command::Dfilt(w) => {
            let layers = d_filtration(w.weight, p);
            let chars = layers.iter().map(|l| d_layer_char(l, eng.table())).collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            let mut latex = String::new();
            let mut rows = Vec::new();
            for (l, c) in layers.iter().zip(&chars) {
                writeln!(text, "nu0={} delta={} nu1={}  dim {}", l.nu0, l.e.delta.tag(), l.e.nu, c.dim()).unwrap();
                writeln!(
                    latex,
                    "% nu0={} delta={} nu1={}\n{} \\\\",
                    l.nu0,
                    l.e.delta.tag(),
                    l.e.nu,
                    character_latex(c)
                )
                .unwrap();
                let mut row = to_json(l);
                row["dim"] = json!(c.dim());
                rows.push(row);
            }
            let total = sum(chars)?;
            write!(text, "total dim {}", total.dim()).unwrap();
            Output { json: json!({"weight": to_json(&w.weight), "layers": rows}), text, latex: latex.trim_end().into() }
        }
        Command::Phifilt { w, j } => {
            let layers = f.p_hi_d_filtration(*j, w.weight)?;
            let total = sum(layers.iter().map(|l| l.resolved.clone()))?;
            layers_output(&layers, &total)
        }
        Command::Jantzen(w) => {
            let layers = f.jantzen_p_filtration(w.weight)?;
            let total = sum(layers.iter().map(|l| l.resolved.clone()))?;
            layers_output(&layers, &total)
        }
        Command::Wall { n } => {
            let wall = f.wall_h2_filtration(*n)?;
            let mut text = String::new();
            let mut latex = String::new();
            for l in &wall.digit_layers {
                writeln!(text, "digit layer {}: L{} x W{}  dim {}", l.i, l.outer, l.weyl, l.character.dim()).unwrap();
                writeln!(latex, "% digit layer {}\n{} \\\\", l.i, character_latex(&l.character)).unwrap();
            }
            for level in &wall.levels {
                let pieces: Vec<_> =
                    level.pieces.iter().map(|t| format!("L{}^({}) x V{}", t.nu, t.d, t.lambda)).collect();
                writeln!(text, "level {}: {}  dim {}", level.i, pieces.join(" + "), level.character.dim()).unwrap();
                writeln!(latex, "% level {}\n{} \\\\", level.i, character_latex(&level.character)).unwrap();
            }
            if wall.levels.is_empty() {
                text.push_str("H^2 = 0");
                latex.push('0');
            }
            Output { json: to_json(&wall), text: text.trim_end().into(), latex: latex.trim_end().into() }
        }
        Command::Idelta { w, delta } => {
            let delta = match delta {
                RootArg::Alpha => Delta::Alpha,
                RootArg::Beta => Delta::Beta,
            };
            let image = f.i_delta_char(delta, w.weight)?;
            let mut json = to_json(&image);
            json["dim"] = json!(image.character.dim());
            let text =
                format!("rule {}\n{}", json["rule"].as_str().unwrap_or_default(), character_text(&image.character));
            Output { json, text, latex: character_latex(&image.character) }
        }
        Command::Report { w, i } => {
            let report = f.hi_layer_report(*i, w.weight)?;
            let mut out = layers_output(&report.layers, &report.total);
            out.text =
                format!("case {} R={} S={}\n{}", report.case.tag(), report.subcase.r, report.subcase.s, out.text);
            out.json = to_json(&report);
            out
        }
    })
}

fn suite_primes(suite: Suite) -> Vec<i64> {
    match suite {
        Suite::Named => vec![3],
        Suite::Degree1 | Suite::Jantzen => vec![3, 5],
        Suite::Idelta => vec![2, 3],
        _ => vec![2, 3, 5],
    }
}

fn run_verify(suite: Suite, prime: Option<Prime>, size: Option<i64>) -> Result<Output, Failure> {
    let suites: Vec<Suite> =
        if suite == Suite::All { Suite::ALL.into_iter().filter(|&s| s != Suite::All).collect() } else { vec![suite] };
    let mut rows = Vec::new();
    let mut text = String::new();
    for s in suites {
        let primes = match prime {
            Some(p) => vec![p],
            None => suite_primes(s).into_iter().map(|q| Prime::new(q).expect("listed primes are prime")).collect(),
        };
        for p in primes {
            let f = Filtrations::new(p);
            let checked = verify::run(s, &f, size).map_err(|v| Failure::Violation(v.to_string()))?;
            let used = size.unwrap_or_else(|| s.default_box(p));
            writeln!(text, "{:<9} p={:<2} box {:<4} {checked} identities hold", s.name(), p.get(), used).unwrap();
            rows.push(json!({"suite": s.name(), "p": p.get(), "box": used, "checked": checked}));
        }
    }
    let latex = format!("% {}", text.trim_end().replace('\n', "\n% "));
    Ok(Output { json: json!({"passed": true, "runs": rows}), text: text.trim_end().into(), latex })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.common.format {
                Format::Json => println!("{}", serde_json::to_string(&out.json).expect("json prints")),
                Format::Text => println!("{}", out.text),
                Format::Latex => println!("{}", out.latex),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
    }
}
