//! Batch interface: enumeration, normalization, key vectors, verification suites, centre reports, and rendering.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use svw::center;
use svw::diagrams::{count_basis, enumerate_basis, DottedDiagram};
use svw::engine::{morphism_to_json, normal_form, specialize, HbarSpec};
use svw::render::{render, RenderFormat};
use svw::verify::{self, VerificationReport};
use svw::word::GenWord;

#[derive(Parser)]
#[command(name = "svw", about = "Exact diagram calculus for the affine VW supercategory")]
struct Cli {
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the basis diagrams with the given arities and total dot count.
    Count {
        /// Bottom arity.
        #[arg(long)]
        a: u32,
        /// Top arity.
        #[arg(long)]
        b: u32,
        /// Total number of dots.
        #[arg(long)]
        k: u32,
    },
    /// List the basis diagrams with the given arities and total dot count.
    Basis {
        /// Bottom arity.
        #[arg(long)]
        a: u32,
        /// Top arity.
        #[arg(long)]
        b: u32,
        /// Total number of dots.
        #[arg(long)]
        k: u32,
        /// Print a JSON array of diagrams instead of string notation.
        #[arg(long)]
        json: bool,
    },
    /// Normalize a generator word and print the morphism as JSON.
    Nf {
        /// Source arity of the word.
        #[arg(long)]
        source: u32,
        /// Deformation parameter: "sym" or an exact rational value.
        #[arg(long, default_value = "sym")]
        hbar: String,
        /// Generator word, read left to right as top to bottom.
        word: String,
    },
    /// Print the key boundary vectors of a basis diagram.
    Keyvec {
        /// Diagram JSON.
        #[arg(long)]
        diagram: String,
        /// Number of base labels; defaults to the minimal (a+b)/2 + dots.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Run a verification suite and print its report as JSON.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Compute a centralizer basis at a rational parameter value and print the centre report.
    Centre {
        /// Arity of the endomorphism algebra.
        #[arg(long, default_value_t = 2)]
        a: u32,
        /// Dot-degree cap of the ambient spanning set.
        #[arg(long, default_value_t = 4)]
        cap: u32,
        /// Exact rational value of the deformation parameter.
        #[arg(long, default_value = "1")]
        hbar: String,
    },
    /// Draw a diagram as an ASCII grid or a standalone TikZ picture.
    Render {
        /// Output format: ascii or tikz.
        #[arg(long)]
        format: String,
        /// Diagram JSON.
        #[arg(long)]
        diagram: String,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Defining relations as exact operator identities under the tensor functor.
    Relations {
        /// Number of base labels of the representing superspace.
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Comma-separated list of module tensor factor counts.
        #[arg(long, default_value = "0,1")]
        m: String,
        /// Largest ambient arity.
        #[arg(long, default_value_t = 3)]
        amax: u32,
        /// Flip one matrix entry of the crossing image as a negative control.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Loop values vanish symbolically and under the tensor functor.
    Loops {
        /// Largest dot power on the first loop strand.
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Largest dot power on the second loop strand.
        #[arg(long, default_value_t = 3)]
        lmax: u32,
    },
    /// Dot sliding, cup and cap sliding, and generalized sliding identities.
    Dotslide {
        /// Largest dot power.
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
    /// Flip anti-multiplicativity and order four on random words.
    Flip {
        /// Number of random words.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Random seed.
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
    },
    /// Closed counting formula against explicit enumeration.
    Counting {
        /// Largest bottom arity.
        #[arg(long, default_value_t = 6)]
        amax: u32,
        /// Largest top arity.
        #[arg(long, default_value_t = 6)]
        bmax: u32,
        /// Largest total dot count.
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Diagonal pairing matrices certifying linear independence of the basis.
    Independence {
        /// Comma-separated triples a:b:k; defaults to the certified sizes.
        #[arg(long)]
        sets: Option<String>,
    },
    /// Defining relations of the endomorphism algebra presentation.
    Presentation {
        /// Largest arity.
        #[arg(long, default_value_t = 3)]
        amax: u32,
    },
    /// Centre membership, annihilation, and centralizer dimensions.
    Centre {
        /// Largest arity.
        #[arg(long, default_value_t = 3)]
        amax: u32,
    },
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    BigRational::from_str(text).map_err(|e| format!("bad rational `{text}`: {e}"))
}

fn parse_sets(text: &str) -> Result<Vec<(u32, u32, u32)>, String> {
    let mut sets = Vec::new();
    for part in text.split(',') {
        let nums: Vec<&str> = part.split(':').collect();
        if nums.len() != 3 {
            return Err(format!("bad independence set `{part}`, expected a:b:k"));
        }
        let mut triple = [0u32; 3];
        for (slot, num) in triple.iter_mut().zip(&nums) {
            *slot = num.trim().parse().map_err(|e| format!("bad number `{num}`: {e}"))?;
        }
        sets.push((triple[0], triple[1], triple[2]));
    }
    Ok(sets)
}

fn load_diagram(text: &str) -> Result<DottedDiagram, String> {
    serde_json::from_str(text).map_err(|e| format!("bad diagram JSON: {e}"))
}

fn run_suite(suite: Suite) -> Result<VerificationReport, String> {
    match suite {
        Suite::Relations { n, m, amax, corrupt } => {
            let ms: Vec<usize> = m
                .split(',')
                .map(|s| s.trim().parse().map_err(|e| format!("bad module count `{s}`: {e}")))
                .collect::<Result<_, _>>()?;
            let sigma = if corrupt {
                verify::corrupted_sigma(n)
            } else {
                svw::pn_rep::sigma_op(n)
            };
            let mut cases = Vec::new();
            for m in ms {
                let report = verify::check_relations_with_sigma(n, m, amax, &sigma)
                    .map_err(|e| e.to_string())?;
                for mut case in report.cases {
                    case.id = format!("m{m}.{}", case.id);
                    cases.push(case);
                }
            }
            Ok(VerificationReport::new("relations", cases))
        }
        Suite::Loops { kmax, lmax } => verify::check_loops(kmax, lmax).map_err(|e| e.to_string()),
        Suite::Dotslide { kmax } => Ok(verify::check_dotslide(kmax)),
        Suite::Flip { trials, seed } => Ok(verify::check_flip(trials, seed)),
        Suite::Counting { amax, bmax, kmax } => Ok(verify::check_counting(amax, bmax, kmax)),
        Suite::Independence { sets } => {
            let sets = match sets {
                Some(text) => parse_sets(&text)?,
                None => verify::default_independence_sets(),
            };
            verify::check_independence(&sets).map_err(|e| e.to_string())
        }
        Suite::Presentation { amax } => {
            center::check_presentation(amax).map_err(|e| e.to_string())
        }
        Suite::Centre { amax } => center::check_centre(amax).map_err(|e| e.to_string()),
    }
}

fn run(command: Command) -> Result<(String, bool), String> {
    match command {
        Command::Count { a, b, k } => Ok((format!("{}\n", count_basis(a, b, k)), true)),
        Command::Basis { a, b, k, json } => {
            let basis = enumerate_basis(a, b, k);
            let text = if json {
                let mut text = serde_json::to_string_pretty(&basis)
                    .map_err(|e| format!("serialization failed: {e}"))?;
                text.push('\n');
                text
            } else {
                basis.iter().map(|d| format!("{d}\n")).collect()
            };
            Ok((text, true))
        }
        Command::Nf { source, hbar, word } => {
            let word = GenWord::parse(&word, source).map_err(|e| e.to_string())?;
            let nf = normal_form(&word);
            let text = if hbar == "sym" {
                morphism_to_json(&nf, &HbarSpec::Symbolic)
            } else {
                let t = parse_rational(&hbar)?;
                morphism_to_json(&specialize(&nf, &t), &HbarSpec::Value(t))
            };
            Ok((format!("{text}\n"), true))
        }
        Command::Keyvec { diagram, n } => {
            let d = load_diagram(&diagram)?;
            let n = n.unwrap_or((d.a() + d.b()) / 2 + d.total_dots());
            let (v, w) = verify::key_vectors(&d, n).map_err(|e| e.to_string())?;
            let label = |idx: &u32| svw::pn_rep::v_label(n, *idx);
            let json = serde_json::json!({
                "n": n,
                "v_d": v.iter().map(label).collect::<Vec<_>>(),
                "w_d": w.iter().map(label).collect::<Vec<_>>(),
            });
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| format!("serialization failed: {e}"))?;
            Ok((format!("{text}\n"), true))
        }
        Command::Verify { suite } => {
            let report = run_suite(suite)?;
            Ok((format!("{}\n", report.to_json()), report.ok))
        }
        Command::Centre { a, cap, hbar } => {
            let t = parse_rational(&hbar)?;
            let text = center::centre_report_json(a, cap, &t).map_err(|e| e.to_string())?;
            let report: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("bad centre report: {e}"))?;
            let dims_match = report["dimension"] == report["predicted"];
            Ok((format!("{text}\n"), dims_match))
        }
        Command::Render { format, diagram } => {
            let format = RenderFormat::from_str(&format).map_err(|e| e.to_string())?;
            let d = load_diagram(&diagram)?;
            Ok((format!("{}\n", render(&d, format)), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, ok)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
