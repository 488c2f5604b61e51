//! Benchmark harness: sweeps (image, QF, scheme, payload) cells over a PGM
//! corpus, verifies every embed in place, and writes deterministic CSVs.

use crate::{load_pgm_dir, AppError};
use jrdh_core::jpeg::{
    decode_to_pixels, encode_from_pixels, parse_jpeg, serialize_jpeg, PixelPlane, TablePolicy,
};
use jrdh_core::metrics::psnr;
use jrdh_core::payload::{random_payload, PRNG_NAME};
use jrdh_core::pgm::read_pgm;
use jrdh_core::rdh::{capacity, embed_image, extract_image, EmbedError, SchemeId};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub enum PsnrRef {
    /// Measure against the decoded original JPEG (isolates embedding
    /// distortion from compression distortion).
    Jpeg,
    /// Measure against the per-image source PGM.
    PgmSource,
    /// Measure against one explicit PGM file.
    PgmPath(PathBuf),
}

impl PsnrRef {
    pub fn parse(s: &str) -> Result<PsnrRef, AppError> {
        match s {
            "jpeg" => Ok(PsnrRef::Jpeg),
            "pgm" => Ok(PsnrRef::PgmSource),
            other => match other.strip_prefix("pgm:") {
                Some(path) if !path.is_empty() => Ok(PsnrRef::PgmPath(PathBuf::from(path))),
                _ => Err(AppError::Other(format!(
                    "invalid --psnr-ref '{other}' (expected jpeg, pgm or pgm:PATH)"
                ))),
            },
        }
    }

    fn label(&self) -> String {
        match self {
            PsnrRef::Jpeg => "jpeg".into(),
            PsnrRef::PgmSource => "pgm".into(),
            PsnrRef::PgmPath(p) => format!("pgm:{}", p.display()),
        }
    }
}

pub struct BenchConfig {
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub quality_factors: Vec<u8>,
    pub points: u64,
    pub seed: u64,
    pub schemes: Vec<SchemeId>,
    pub psnr_ref: PsnrRef,
    pub table_policy: TablePolicy,
}

fn fmt_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4}")
    }
}

fn policy_label(policy: TablePolicy) -> &'static str {
    match policy {
        TablePolicy::PreserveOriginal => "preserve",
        TablePolicy::RebuildOptimal => "optimal",
    }
}

pub fn run(config: BenchConfig) -> Result<(), AppError> {
    if config.points == 0 {
        return Err(AppError::Other("--points must be at least 1".into()));
    }
    let mut qfs = config.quality_factors.clone();
    qfs.sort_unstable();
    qfs.dedup();
    let mut schemes = config.schemes.clone();
    schemes.sort_by_key(|s| s.name());
    schemes.dedup();

    let sources = load_pgm_dir(&config.corpus)?;
    std::fs::create_dir_all(&config.out).map_err(|e| AppError::Io(config.out.clone(), e))?;

    let fixed_reference = match &config.psnr_ref {
        PsnrRef::PgmPath(path) => {
            let data = std::fs::read(path).map_err(|e| AppError::Io(path.clone(), e))?;
            Some(read_pgm(&data).map_err(|e| AppError::Other(format!("{}: {e}", path.display())))?)
        }
        _ => None,
    };

    let mut results = String::from(
        "image,qf,scheme,payload_bits,capacity_bits,psnr_db,orig_bytes,marked_bytes,\
         size_increase_bytes,coeffs_modified,error\n",
    );
    let mut capacities = String::from("image,qf,huang2016,liu2018,proposed\n");

    for (name, plane) in &sources {
        for &qf in &qfs {
            let encoded = encode_from_pixels(plane, qf);
            let orig_bytes = serialize_jpeg(&encoded, config.table_policy)?;
            let original = parse_jpeg(&orig_bytes)?;

            capacities.push_str(&format!(
                "{name},{qf},{},{},{}\n",
                capacity(&original, SchemeId::Huang2016),
                capacity(&original, SchemeId::Liu2018),
                capacity(&original, SchemeId::Proposed),
            ));

            let reference: PixelPlane = match &config.psnr_ref {
                PsnrRef::Jpeg => decode_to_pixels(&original),
                PsnrRef::PgmSource => plane.clone(),
                PsnrRef::PgmPath(_) => fixed_reference.clone().unwrap(),
            };

            let huang_cap = capacity(&original, SchemeId::Huang2016);
            for scheme in &schemes {
                let cell_capacity = capacity(&original, *scheme);
                for step in 1..=config.points {
                    let bits = (huang_cap * step / config.points).min(huang_cap.saturating_sub(32));
                    let payload = random_payload(bits as usize, config.seed);
                    let row_head = format!("{name},{qf},{scheme},{bits},{cell_capacity}");
                    match embed_image(original.clone(), &payload, *scheme) {
                        Ok((marked, report)) => {
                            // Round-trip verification in place; a failure here
                            // is a defect, never a results row.
                            let (check_payload, check_image) =
                                extract_image(marked.clone(), *scheme).map_err(|e| {
                                    AppError::Other(format!(
                                        "round-trip verification failed for {name} qf{qf} \
                                         {scheme} at {bits} bits: {e}"
                                    ))
                                })?;
                            if check_payload != payload
                                || check_image.coefficients != original.coefficients
                            {
                                return Err(AppError::Other(format!(
                                    "round-trip verification failed for {name} qf{qf} {scheme} \
                                     at {bits} bits: recovered data differs"
                                )));
                            }
                            let marked_bytes = serialize_jpeg(&marked, config.table_policy)?;
                            let p = psnr(&reference, &decode_to_pixels(&marked))
                                .map_err(|e| AppError::Other(e.to_string()))?;
                            results.push_str(&format!(
                                "{row_head},{},{},{},{},{},\n",
                                fmt_psnr(p),
                                orig_bytes.len(),
                                marked_bytes.len(),
                                marked_bytes.len() as i64 - orig_bytes.len() as i64,
                                report.coeffs_modified,
                            ));
                        }
                        Err(err @ EmbedError::PayloadTooLarge { .. }) => {
                            results.push_str(&format!("{row_head},,,,,,payload_too_large\n"));
                            eprintln!("warning: {name} qf{qf} {scheme} at {bits} bits: {err}");
                        }
                        Err(err @ EmbedError::Overflow { .. }) => {
                            results.push_str(&format!("{row_head},,,,,,overflow\n"));
                            eprintln!("warning: {name} qf{qf} {scheme} at {bits} bits: {err}");
                        }
                    }
                }
            }
        }
    }

    let results_path = config.out.join("results.csv");
    let capacity_path = config.out.join("capacity.csv");
    write(&results_path, results.as_bytes())?;
    write(&capacity_path, capacities.as_bytes())?;

    let meta =
        format!(
        "prng={PRNG_NAME}\nseed={}\npoints={}\nqf={}\nschemes={}\npsnr_ref={}\ntable_policy={}\n",
        config.seed,
        config.points,
        qfs.iter().map(u8::to_string).collect::<Vec<_>>().join(","),
        schemes.iter().map(|s| s.name().to_owned()).collect::<Vec<_>>().join(","),
        config.psnr_ref.label(),
        policy_label(config.table_policy),
    );
    write(&config.out.join("run.txt"), meta.as_bytes())?;

    println!("wrote {}", results_path.display());
    println!("wrote {}", capacity_path.display());
    println!("prng={PRNG_NAME} seed={}", config.seed);
    Ok(())
}

fn write(path: &Path, data: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, data).map_err(|e| AppError::Io(path.to_owned(), e))
}
