//! `jrdh` — coefficient-level JPEG reversible data hiding.
//!
//! Verbs: embed, extract, recover, capacity, bench, gen-corpus.
//! Exit codes: 0 success, 1 generic failure, 10 unsupported format,
//! 11 payload too large, 12 coefficient overflow, 13 corrupt length frame,
//! 14 I/O error.

mod bench;

use clap::{Parser, Subcommand};
use jrdh_core::jpeg::{self, parse_jpeg, serialize_jpeg, TablePolicy};
use jrdh_core::payload::{random_payload, BitSeq, PRNG_NAME};
use jrdh_core::pgm::read_pgm;
use jrdh_core::rdh::{self, capacity, embed_image, extract_image, EmbedReport, SchemeId};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "jrdh",
    version,
    about = "Reversible data hiding in JPEG quantized DCT coefficients",
    after_help = "Random payloads use the chacha20 PRNG keyed by --seed, so runs are reproducible."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    s.parse()
}

fn parse_policy(s: &str) -> Result<TablePolicy, String> {
    match s {
        "preserve" => Ok(TablePolicy::PreserveOriginal),
        "optimal" => Ok(TablePolicy::RebuildOptimal),
        other => Err(format!(
            "unknown table policy '{other}' (expected preserve or optimal)"
        )),
    }
}

fn parse_quality(s: &str) -> Result<u8, String> {
    let q: u8 = s
        .parse()
        .map_err(|_| format!("invalid quality factor '{s}'"))?;
    if (1..=100).contains(&q) {
        Ok(q)
    } else {
        Err(format!("quality factor {q} outside [1, 100]"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Embed a payload into a baseline JPEG, reversibly.
    Embed {
        /// Cover JPEG path.
        input: PathBuf,
        /// Marked JPEG output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: SchemeId,
        /// Payload file (raw bytes, embedded MSB first).
        #[arg(long, conflicts_with = "random_bits")]
        payload: Option<PathBuf>,
        /// Generate a seeded random payload of this many bits instead.
        #[arg(long)]
        random_bits: Option<u64>,
        /// Seed for --random-bits.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Huffman tables for the marked file: preserve | optimal.
        #[arg(long, value_parser = parse_policy, default_value = "optimal")]
        table_policy: TablePolicy,
    },
    /// Extract the payload and recover the original JPEG.
    Extract {
        /// Marked JPEG path.
        input: PathBuf,
        /// Where to write the payload bytes.
        #[arg(long)]
        payload_out: PathBuf,
        /// Where to write the recovered JPEG.
        #[arg(long)]
        recovered_out: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: SchemeId,
        /// Huffman tables for the recovered file: preserve | optimal.
        /// `optimal` reproduces a canonical original byte for byte.
        #[arg(long, value_parser = parse_policy, default_value = "optimal")]
        table_policy: TablePolicy,
    },
    /// Recover the original JPEG only (extraction without keeping the bits).
    Recover {
        /// Marked JPEG path.
        input: PathBuf,
        /// Where to write the recovered JPEG.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: SchemeId,
        #[arg(long, value_parser = parse_policy, default_value = "optimal")]
        table_policy: TablePolicy,
    },
    /// Print per-scheme embedding capacities of a JPEG.
    Capacity { input: PathBuf },
    /// Encode a directory of PGM images to JPEG at the given quality factors.
    GenCorpus {
        /// Directory containing binary PGM (P5) files.
        input_dir: PathBuf,
        /// Output directory for the generated JPEGs.
        #[arg(long)]
        out: PathBuf,
        /// Quality factors.
        #[arg(long, value_delimiter = ',', value_parser = parse_quality, default_values_t = [50u8, 70, 90])]
        qf: Vec<u8>,
    },
    /// Sweep (image, QF, scheme, payload) grid and emit CSV reports.
    Bench {
        /// Directory containing binary PGM (P5) source images.
        #[arg(long)]
        corpus: PathBuf,
        /// Output directory for results.csv, capacity.csv and run.txt.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_quality, default_values_t = [50u8, 70, 90])]
        qf: Vec<u8>,
        /// Number of payload grid points (evenly spaced fractions of the
        /// per-image Huang2016 capacity).
        #[arg(long, default_value_t = 10)]
        points: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Schemes to sweep.
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme,
              default_values_t = [SchemeId::Proposed, SchemeId::Liu2018, SchemeId::Huang2016])]
        schemes: Vec<SchemeId>,
        /// PSNR reference: jpeg (decoded original JPEG), pgm (the source
        /// PGM), or pgm:PATH (an explicit PGM file).
        #[arg(long, default_value = "jpeg")]
        psnr_ref: String,
        #[arg(long, value_parser = parse_policy, default_value = "optimal")]
        table_policy: TablePolicy,
    },
}

/// Application error with a stable exit code per failure class.
#[derive(Debug)]
pub enum AppError {
    Jpeg(jpeg::Error),
    Embed(rdh::EmbedError),
    Extract(rdh::ExtractError),
    Io(PathBuf, std::io::Error),
    Other(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Jpeg(e) => write!(f, "{e}"),
            AppError::Embed(e) => write!(f, "{e}"),
            AppError::Extract(e) => write!(f, "{e}"),
            AppError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            AppError::Other(msg) => f.write_str(msg),
        }
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Jpeg(jpeg::Error::UnsupportedFormat { .. }) => 10,
            AppError::Embed(rdh::EmbedError::PayloadTooLarge { .. }) => 11,
            AppError::Embed(rdh::EmbedError::Overflow { .. }) => 12,
            AppError::Extract(rdh::ExtractError::FrameCorrupt(_)) => 13,
            AppError::Io(..) => 14,
            _ => 1,
        }
    }
}

impl From<jpeg::Error> for AppError {
    fn from(e: jpeg::Error) -> Self {
        AppError::Jpeg(e)
    }
}

impl From<rdh::EmbedError> for AppError {
    fn from(e: rdh::EmbedError) -> Self {
        AppError::Embed(e)
    }
}

impl From<rdh::ExtractError> for AppError {
    fn from(e: rdh::ExtractError) -> Self {
        AppError::Extract(e)
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, AppError> {
    std::fs::read(path).map_err(|e| AppError::Io(path.to_owned(), e))
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, data).map_err(|e| AppError::Io(path.to_owned(), e))
}

fn print_report(report: &EmbedReport, payload_bits: u64) {
    println!("scheme={}", report.scheme);
    println!("capacity_bits={}", report.capacity_bits);
    println!("payload_bits={payload_bits}");
    println!("bits_embedded={}", report.bits_embedded);
    println!("coeffs_visited={}", report.coeffs_visited);
    println!("coeffs_modified={}", report.coeffs_modified);
}

fn cmd_embed(
    input: &Path,
    out: &Path,
    scheme: SchemeId,
    payload: Option<&Path>,
    random_bits: Option<u64>,
    seed: u64,
    policy: TablePolicy,
) -> Result<(), AppError> {
    let payload = match (payload, random_bits) {
        (Some(path), None) => BitSeq::from_bytes(&read_file(path)?),
        (None, Some(bits)) => {
            println!("prng={PRNG_NAME} seed={seed}");
            random_payload(bits as usize, seed)
        }
        _ => {
            return Err(AppError::Other(
                "exactly one of --payload or --random-bits is required".into(),
            ))
        }
    };
    let image = parse_jpeg(&read_file(input)?)?;
    let payload_bits = payload.len() as u64;
    let (marked, report) = embed_image(image, &payload, scheme)?;
    write_file(out, &serialize_jpeg(&marked, policy)?)?;
    print_report(&report, payload_bits);
    Ok(())
}

fn cmd_extract(
    input: &Path,
    payload_out: &Path,
    recovered_out: &Path,
    scheme: SchemeId,
    policy: TablePolicy,
) -> Result<(), AppError> {
    let marked = parse_jpeg(&read_file(input)?)?;
    let (payload, recovered) = extract_image(marked, scheme)?;
    write_file(payload_out, &payload.to_bytes())?;
    write_file(recovered_out, &serialize_jpeg(&recovered, policy)?)?;
    println!("scheme={scheme}");
    println!("payload_bits={}", payload.len());
    Ok(())
}

fn cmd_recover(
    input: &Path,
    out: &Path,
    scheme: SchemeId,
    policy: TablePolicy,
) -> Result<(), AppError> {
    let marked = parse_jpeg(&read_file(input)?)?;
    let (payload, recovered) = extract_image(marked, scheme)?;
    write_file(out, &serialize_jpeg(&recovered, policy)?)?;
    println!("scheme={scheme}");
    println!("payload_bits_discarded={}", payload.len());
    Ok(())
}

fn cmd_capacity(input: &Path) -> Result<(), AppError> {
    let image = parse_jpeg(&read_file(input)?)?;
    println!("nonzero_ac={}", image.count_nonzero_ac());
    for scheme in SchemeId::ALL {
        println!("{}={}", scheme, capacity(&image, scheme));
    }
    Ok(())
}

/// Sorted *.pgm files of a directory as (stem, plane) pairs.
fn load_pgm_dir(dir: &Path) -> Result<Vec<(String, jpeg::PixelPlane)>, AppError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| AppError::Io(dir.to_owned(), e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|ext| ext.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(AppError::Other(format!(
            "no .pgm files found in {}",
            dir.display()
        )));
    }
    let mut planes = Vec::with_capacity(paths.len());
    for path in paths {
        let plane = read_pgm(&read_file(&path)?)
            .map_err(|e| AppError::Other(format!("{}: {e}", path.display())))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        planes.push((stem, plane));
    }
    Ok(planes)
}

fn cmd_gen_corpus(input_dir: &Path, out: &Path, qfs: &[u8]) -> Result<(), AppError> {
    std::fs::create_dir_all(out).map_err(|e| AppError::Io(out.to_owned(), e))?;
    for (stem, plane) in load_pgm_dir(input_dir)? {
        for &qf in qfs {
            let image = jpeg::encode_from_pixels(&plane, qf);
            let bytes = serialize_jpeg(&image, TablePolicy::RebuildOptimal)?;
            let path = out.join(format!("{stem}_qf{qf:02}.jpg"));
            write_file(&path, &bytes)?;
            println!("{} ({} bytes)", path.display(), bytes.len());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Embed {
            input,
            out,
            scheme,
            payload,
            random_bits,
            seed,
            table_policy,
        } => cmd_embed(
            &input,
            &out,
            scheme,
            payload.as_deref(),
            random_bits,
            seed,
            table_policy,
        ),
        Command::Extract {
            input,
            payload_out,
            recovered_out,
            scheme,
            table_policy,
        } => cmd_extract(&input, &payload_out, &recovered_out, scheme, table_policy),
        Command::Recover {
            input,
            out,
            scheme,
            table_policy,
        } => cmd_recover(&input, &out, scheme, table_policy),
        Command::Capacity { input } => cmd_capacity(&input),
        Command::GenCorpus { input_dir, out, qf } => cmd_gen_corpus(&input_dir, &out, &qf),
        Command::Bench {
            corpus,
            out,
            qf,
            points,
            seed,
            schemes,
            psnr_ref,
            table_policy,
        } => bench::run(bench::BenchConfig {
            corpus,
            out,
            quality_factors: qf,
            points,
            seed,
            schemes,
            psnr_ref: bench::PsnrRef::parse(&psnr_ref)?,
            table_policy,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
