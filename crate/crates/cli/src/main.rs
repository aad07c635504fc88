use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hoinv::groupalg::ext_dims;
use hoinv::instance::Instance;
use hoinv::invariants::invariants_filtration;
use hoinv::magnus::graded_dims;
use hoinv::verify::{magnus_monomials, run_checks, Status};
use hoinv::AModule;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "hoinv", version, about = "Higher order invariants and cohomology of group representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Info { file: PathBuf },
    /// Print N(q) = dim I^q/I^(q+1) for q = 0..=Q.
    Grades {
        file: PathBuf,
        #[arg(long = "qmax")]
        q_max: usize,
    },
    /// Print the invariant filtration with bases.
    Invariants {
        file: PathBuf,
        #[arg(long = "qmax")]
        q_max: usize,
    },
    /// Print dim Ext^p(A/I^(q+1), V) for p = 0..=P (finite groups).
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long = "pmax")]
        p_max: usize,
    },
    /// Run every check and print a report.
    Verify {
        file: PathBuf,
        /// Write the JSON report to this path, or to stdout with `-`.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify the built-in instance corpus.
    Selftest,
}

const CORPUS: &[(&str, &str)] = &[
    ("z3_f3", include_str!("../../../fixtures/z3_f3.toml")),
    ("z3_f3_trivial", include_str!("../../../fixtures/z3_f3_trivial.toml")),
    ("z5_f5", include_str!("../../../fixtures/z5_f5.toml")),
    ("z4_f2", include_str!("../../../fixtures/z4_f2.toml")),
    ("z2xz2_f2", include_str!("../../../fixtures/z2xz2_f2.toml")),
    ("z2xz2_f2_trivial", include_str!("../../../fixtures/z2xz2_f2_trivial.toml")),
    ("s3_f2", include_str!("../../../fixtures/s3_f2.toml")),
    ("s3_f3", include_str!("../../../fixtures/s3_f3.toml")),
    ("s3_q", include_str!("../../../fixtures/s3_q.toml")),
    ("s3_q_standard", include_str!("../../../fixtures/s3_q_standard.toml")),
    ("free2", include_str!("../../../fixtures/free2.toml")),
    ("comm", include_str!("../../../fixtures/comm.toml")),
    ("surface2", include_str!("../../../fixtures/surface2.toml")),
    ("jordan3_q", include_str!("../../../fixtures/jordan3_q.toml")),
    ("cyclic4_f2", include_str!("../../../fixtures/cyclic4_f2.toml")),
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load(path: &Path) -> Result<Instance, String> {
    Instance::load(path).map_err(|e| e.to_string())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Info { file } => {
            let inst = load(&file)?;
            let pres = inst.presentation();
            println!("name            {}", inst.name());
            println!("field           {}", inst.field.tag());
            println!("generators      {}", pres.generators().join(" "));
            match inst.finite_group() {
                Some(g) => println!("group order     {}", g.order()),
                None => println!("relators        {}", pres.relators().len()),
            }
            println!("dim V           {}", inst.representation.dim());
            if let Some(words) = &inst.subgroup {
                let shown: Vec<String> = words.iter().map(|w| pres.display_word(w)).collect();
                println!("subgroup        {}", shown.join(", "));
            }
            let l = inst.limits();
            println!("limits          q_max {} p_max {} magnus_degree {}", l.q_max, l.p_max, l.magnus_degree());
            println!("magnus size     {} monomials (cap {})", magnus_monomials(&inst), inst.memory_cap);
            Ok(ExitCode::SUCCESS)
        }
        Command::Grades { file, q_max } => {
            let inst = load(&file)?;
            let dims = match inst.algebra() {
                Some(alg) => alg.graded_dims(q_max).as_slice().to_vec(),
                None => graded_dims(inst.presentation(), inst.field, q_max, inst.memory_cap)
                    .map_err(|e| e.to_string())?
                    .as_slice()
                    .to_vec(),
            };
            println!("{}", join(&dims));
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { file, q_max } => {
            let inst = load(&file)?;
            let f = invariants_filtration(&inst.representation, q_max);
            println!("dims {}", join(&f.dims()));
            for (q, h) in f.terms().iter().enumerate() {
                println!("H_{q}: dim {}", h.dim());
                for b in h.basis() {
                    let entries: Vec<String> = b.iter().map(|s| s.to_string()).collect();
                    println!("  [{}]", entries.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cohomology { file, q, p_max } => {
            let inst = load(&file)?;
            let alg = inst.algebra().ok_or("cohomology needs a permutation group")?;
            let chain = alg.aug_powers(q + 1);
            let (m, _) = AModule::regular(alg.clone()).subquotient(&chain[0], &chain[q + 1]).map_err(|e| e.to_string())?;
            let v = inst.representation.module().expect("finite instances carry a module");
            let dims = ext_dims(&m, v, p_max).map_err(|e| e.to_string())?;
            println!("{}", join(&dims));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, json } => {
            let inst = load(&file)?;
            let report = run_checks(&inst);
            match json.as_deref() {
                Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
                Some(p) => {
                    std::fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
                    print!("{}", report.to_text());
                }
                None => print!("{}", report.to_text()),
            }
            Ok(if report.has_violation() { ExitCode::from(EXIT_VIOLATION) } else { ExitCode::SUCCESS })
        }
        Command::Selftest => {
            let mut failed = false;
            for (name, text) in CORPUS {
                let inst = Instance::parse(text).map_err(|e| format!("built-in {name}: {e}"))?;
                let report = run_checks(&inst);
                let bad = report.has_violation();
                failed |= bad;
                println!(
                    "{:<5} {name:<18} {} verified, {} observation, {} skipped",
                    if bad { "FAIL" } else { "ok" },
                    report.count(Status::Verified),
                    report.count(Status::Observation),
                    report.count(Status::Skipped)
                );
                if bad {
                    for c in report.checks.iter().filter(|c| c.status == Status::Violated) {
                        println!("      {}: {}", c.id, c.details);
                    }
                }
            }
            Ok(if failed { ExitCode::from(EXIT_VIOLATION) } else { ExitCode::SUCCESS })
        }
    }
}
