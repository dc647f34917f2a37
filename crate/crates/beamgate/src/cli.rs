//! Command-line front end: `multiply`, `crosstalk`, `deutsch-jozsa`,
//! `scaling` and `export-field` subcommands over the library.
//!
//! Every command prints a human-readable summary on stdout and writes its
//! result files plus a `manifest.json` into the output directory. Errors go
//! to stderr as a single machine-parsable line and map to documented exit
//! codes (see [`Error::exit_code`]).

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::experiments::{crosstalk_bench, dj_run, scaling_study, ScalingEntry};
use crate::gates::{
    dj_expected_output, hadamard_basis_state, hadamard_matrix, matvec_oracle, oracle_matrix,
    BooleanFunction, GateMatrix, StateVector,
};
use crate::io;
use crate::lattice::gaussian_cell_mode;
use crate::optics::{pipeline_field_at, run_pipeline, Mode, Plane};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "beamgate",
    version,
    about = "Optical matrix-vector multiplication on a Gaussian-mode lattice"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file: JSON or `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Pipeline mode: ideal | physical (overrides the config file).
    #[arg(long, global = true)]
    mode: Option<Mode>,

    /// Directory for result files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// RNG seed for sampled balanced functions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply an N x N matrix with a length-N vector through the pipeline.
    Multiply {
        /// Matrix file: CSV of (re, im) column pairs or JSON [[ [re,im], ..], ..].
        matrix: PathBuf,
        /// Vector file: CSV with one (re, im) pair per line or JSON [[re,im], ..].
        vector: PathBuf,
        /// Also compute the direct summation and report the max deviation.
        #[arg(long)]
        compare_oracle: bool,
    },
    /// Hadamard-basis crosstalk matrix and fidelity for N = 2^n.
    Crosstalk {
        /// Number of qubits (1 to 4).
        #[arg(long)]
        n: u32,
        /// Write a farfield intensity PGM per basis state.
        #[arg(long)]
        dump_panels: bool,
    },
    /// Run the Deutsch-Jozsa protocol on a Boolean function.
    DeutschJozsa {
        /// constant0 | constant1 | random-balanced | a bit string like 1001.
        #[arg(long)]
        function: String,
        /// Number of qubits (required unless the function is a bit string).
        #[arg(long)]
        n: Option<u32>,
        /// Zero-row probability above which the verdict is "constant".
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Crosstalk fidelity versus lattice dimension at fixed total extent.
    Scaling {
        /// Lattice dimensions to sweep.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8, 16])]
        dims: Vec<usize>,
        /// Total lattice width in meters (overrides the config file).
        #[arg(long)]
        extent: Option<f64>,
    },
    /// Render a lattice field and export PGM, PNG and raw CSV.
    ExportField {
        /// uniform | hadamard:K | cell:J,K | vector:FILE.
        #[arg(long)]
        state: String,
        /// Lattice dimension.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Matrix on the second plane: hadamard | identity | a file path.
        #[arg(long)]
        matrix: Option<String>,
        /// Pipeline plane to export: input | modulated | farfield | filtered.
        #[arg(long, default_value = "input")]
        plane: Plane,
    },
}

/// Parse arguments, execute, and translate errors into exit codes.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.tag());
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => SimConfig::load(path)?,
        None => SimConfig::default(),
    };
    if let Some(mode) = cli.mode {
        cfg.mode = mode;
    }
    let mut out = Outputs::new(&cli.out)?;
    match cli.command {
        Command::Multiply {
            matrix,
            vector,
            compare_oracle,
        } => cmd_multiply(&cfg, &matrix, &vector, compare_oracle, &mut out)?,
        Command::Crosstalk { n, dump_panels } => cmd_crosstalk(&cfg, n, dump_panels, &mut out)?,
        Command::DeutschJozsa {
            function,
            n,
            threshold,
        } => cmd_deutsch_jozsa(&cfg, &function, n, threshold, cli.seed, &mut out)?,
        Command::Scaling { dims, extent } => cmd_scaling(&cfg, &dims, extent, &mut out)?,
        Command::ExportField {
            state,
            n,
            matrix,
            plane,
        } => cmd_export_field(&cfg, &state, n, matrix.as_deref(), plane, &mut out)?,
    }
    out.finish(&cfg, cli.seed)
}

/// One entry in the run manifest.
#[derive(Serialize)]
pub struct OutputRecord {
    pub path: String,
    /// For intensity images: the physical intensity mapped to full scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_full_scale_intensity: Option<f64>,
}

/// Run metadata written next to every result set.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: String,
    pub timestamp_unix: u64,
    pub seed: u64,
    pub config: SimConfig,
    pub outputs: Vec<OutputRecord>,
}

/// Collects result files so the manifest can reference each exactly once.
struct Outputs {
    dir: PathBuf,
    records: Vec<OutputRecord>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            records: Vec::new(),
        })
    }

    fn record(&mut self, name: &str, scale: Option<f64>) {
        self.records.push(OutputRecord {
            path: name.to_string(),
            image_full_scale_intensity: scale,
        });
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        io::write_atomic(&self.dir.join(name), text.as_bytes())?;
        self.record(name, None);
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        io::write_json(&self.dir.join(name), value)?;
        self.record(name, None);
        Ok(())
    }

    fn write_pgm(&mut self, name: &str, field: &crate::lattice::Field) -> Result<()> {
        let scale = io::write_field_pgm(&self.dir.join(name), field)?;
        self.record(name, Some(scale));
        Ok(())
    }

    fn write_png(&mut self, name: &str, field: &crate::lattice::Field) -> Result<()> {
        let scale = io::write_field_png(&self.dir.join(name), field)?;
        self.record(name, Some(scale));
        Ok(())
    }

    fn finish(self, cfg: &SimConfig, seed: u64) -> Result<()> {
        let manifest = RunManifest {
            command: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            seed,
            config: cfg.clone(),
            outputs: self.records,
        };
        io::write_json(&self.dir.join("manifest.json"), &manifest)
    }
}

fn cmd_multiply(
    cfg: &SimConfig,
    matrix_path: &Path,
    vector_path: &Path,
    compare_oracle: bool,
    out: &mut Outputs,
) -> Result<()> {
    let m = io::read_matrix(matrix_path)?;
    let u = io::read_vector(vector_path)?;
    if m.dim() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {0}x{0} but vector has length {1}",
            m.dim(),
            u.dim()
        )));
    }
    let pipeline = cfg.pipeline_for(m.dim())?;
    let readout = run_pipeline(&u, &m, &pipeline)?;

    println!("mode: {}", cfg.mode);
    for (j, p) in readout.probabilities.iter().enumerate() {
        println!("row {j}: {p}");
    }
    if compare_oracle {
        let expected = matvec_oracle(&m, &u)?.intensities();
        let total: f64 = expected.iter().sum();
        let mut max_dev = 0.0f64;
        for (j, e) in expected.iter().enumerate() {
            let reference = if total > 0.0 { e / total } else { 0.0 };
            max_dev = max_dev.max((readout.probabilities[j] - reference).abs());
            println!("oracle row {j}: {reference}");
        }
        println!("max deviation from oracle: {max_dev:e}");
    }

    let bars: Vec<String> = readout
        .probabilities
        .iter()
        .enumerate()
        .map(|(j, p)| format!("{j},{p}"))
        .collect();
    out.write_text(
        "probabilities.csv",
        &format!("row,probability\n{}\n", bars.join("\n")),
    )?;
    out.write_json("readout.json", &readout)?;
    Ok(())
}

fn cmd_crosstalk(cfg: &SimConfig, n_qubits: u32, dump_panels: bool, out: &mut Outputs) -> Result<()> {
    if !(1..=4).contains(&n_qubits) {
        return Err(Error::InvalidArgument(format!(
            "crosstalk supports 1 to 4 qubits, got {n_qubits}"
        )));
    }
    let n = 1usize << n_qubits;
    let pipeline = cfg.pipeline_for(n)?;
    let bench = crosstalk_bench(n_qubits, &pipeline)?;
    println!(
        "N={n} mode={} fidelity={:.6} +/- {:.6}",
        cfg.mode, bench.fidelity, bench.fidelity_std
    );

    out.write_text("crosstalk.csv", &io::real_matrix_to_csv(&bench.entries))?;
    #[derive(Serialize)]
    struct Summary {
        n: usize,
        fidelity: f64,
        fidelity_std: f64,
    }
    out.write_json(
        "summary.json",
        &Summary {
            n,
            fidelity: bench.fidelity,
            fidelity_std: bench.fidelity_std,
        },
    )?;
    let h = hadamard_matrix(n_qubits);
    out.write_text("hadamard.csv", &io::matrix_to_csv(&h))?;

    if dump_panels {
        for j in 0..n {
            let u = hadamard_basis_state(n_qubits, j)?;
            let field = pipeline_field_at(&u, &h, &pipeline, Plane::Farfield)?;
            out.write_pgm(&format!("panel_u{j}.pgm"), &field)?;
        }
    }
    Ok(())
}

fn parse_function_spec(
    spec: &str,
    n_qubits: Option<u32>,
    seed: u64,
) -> Result<BooleanFunction> {
    let need_n = || {
        n_qubits.ok_or_else(|| {
            Error::InvalidArgument(format!("--n is required with --function {spec}"))
        })
    };
    match spec {
        "constant0" => BooleanFunction::constant(1 << need_n()?, 0),
        "constant1" => BooleanFunction::constant(1 << need_n()?, 1),
        "random-balanced" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            BooleanFunction::random_balanced(1 << need_n()?, &mut rng)
        }
        spec => {
            // a path to a truth-table file ("1001" or "1,0,0,1"), or the
            // bit string itself
            let bits = if Path::new(spec).is_file() {
                std::fs::read_to_string(spec)?
                    .chars()
                    .filter(|c| !c.is_whitespace() && *c != ',')
                    .collect()
            } else {
                spec.to_string()
            };
            let f = BooleanFunction::from_bits(&bits)?;
            if !f.len().is_power_of_two() || f.len() < 2 {
                return Err(Error::Parse(format!(
                    "bit string length {} is not a power of two >= 2",
                    f.len()
                )));
            }
            if let Some(nq) = n_qubits {
                if f.len() != 1 << nq {
                    return Err(Error::DimensionMismatch(format!(
                        "bit string length {} vs 2^{nq}",
                        f.len()
                    )));
                }
            }
            Ok(f)
        }
    }
}

fn cmd_deutsch_jozsa(
    cfg: &SimConfig,
    function: &str,
    n_qubits: Option<u32>,
    threshold: Option<f64>,
    seed: u64,
    out: &mut Outputs,
) -> Result<()> {
    let f = parse_function_spec(function, n_qubits, seed)?;
    let n = f.len();
    let threshold = threshold.unwrap_or(cfg.dj_threshold);
    let pipeline = cfg.pipeline_for(n)?;
    let verdict = dj_run(&f, &pipeline, threshold)?;

    let bits: String = f.bits().iter().map(|b| char::from(b'0' + b)).collect();
    println!("function: {bits} ({})", verdict.function_label);
    println!(
        "verdict: {} ({})",
        verdict.verdict,
        if verdict.correct { "correct" } else { "wrong" }
    );
    println!("zero-row probability: {}", verdict.zero_row_probability);
    let expected = dj_expected_output(&f, n.trailing_zeros())?;
    let expected_row = expected
        .intensities()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(j, _)| j)
        .unwrap_or(0);
    println!(
        "probability at expected row {expected_row}: {}",
        verdict.measured_probabilities[expected_row]
    );

    let bars: Vec<String> = verdict
        .measured_probabilities
        .iter()
        .enumerate()
        .map(|(j, p)| format!("{j},{p}"))
        .collect();
    out.write_text(
        "bars.csv",
        &format!("row,normalized_intensity\n{}\n", bars.join("\n")),
    )?;

    #[derive(Serialize)]
    struct VerdictFile<'a> {
        bits: String,
        threshold: f64,
        expected_row: usize,
        #[serde(flatten)]
        verdict: &'a crate::experiments::DjVerdict,
    }
    out.write_json(
        "verdict.json",
        &VerdictFile {
            bits,
            threshold,
            expected_row,
            verdict: &verdict,
        },
    )?;
    out.write_text("oracle.csv", &io::matrix_to_csv(&oracle_matrix(&f)))?;
    Ok(())
}

fn cmd_scaling(
    cfg: &SimConfig,
    dims: &[usize],
    extent: Option<f64>,
    out: &mut Outputs,
) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    let mut scaling = cfg.scaling();
    if let Some(extent) = extent {
        scaling.extent = extent;
    }
    let rows = scaling_study(dims, &scaling);

    println!(
        "mode={} extent={} m, lattice_px={}",
        scaling.mode, scaling.extent, scaling.lattice_px
    );
    println!("{:>4} {:>12} {:>20} {:>16}", "N", "waist (m)", "fidelity", "overlap");
    for row in &rows {
        match row.fidelity {
            Some(fid) => println!(
                "{:>4} {:>12.3e} {:>12.6} +/- {:<8.6} {:>13.3e}",
                row.n,
                row.waist,
                fid,
                row.fidelity_std.unwrap_or(0.0),
                row.adjacent_overlap.unwrap_or(0.0)
            ),
            None => println!(
                "{:>4} {:>12.3e} failed: {}",
                row.n,
                row.waist,
                row.error.as_deref().unwrap_or("unknown")
            ),
        }
    }

    out.write_text("scaling.csv", &scaling_csv(&rows))?;
    out.write_json("scaling.json", &rows)?;
    Ok(())
}

fn scaling_csv(rows: &[ScalingEntry]) -> String {
    let mut text = String::from("n,waist,fidelity,fidelity_std,adjacent_overlap,error\n");
    for row in rows {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{},\"{}\"\n",
            row.n,
            row.waist,
            opt(row.fidelity),
            opt(row.fidelity_std),
            opt(row.adjacent_overlap),
            row.error.as_deref().unwrap_or("")
        ));
    }
    text
}

fn cmd_export_field(
    cfg: &SimConfig,
    state: &str,
    n: usize,
    matrix: Option<&str>,
    plane: Plane,
    out: &mut Outputs,
) -> Result<()> {
    let pipeline = cfg.pipeline_for(n)?;

    // cell:J,K renders a single mode directly; everything else drives the
    // pipeline with a state vector
    if let Some(rest) = state.strip_prefix("cell:") {
        let (j, k) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected cell:J,K, got '{state}'")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad row index '{j}'")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad column index '{k}'")))?;
        let field = gaussian_cell_mode(&pipeline.layout, j, k)?;
        return export_field_files(&field, out);
    }

    let u = parse_state_spec(state, n)?;
    let m = match matrix {
        None => GateMatrix::from_broadcast_vector(&vec![Complex64::new(1.0, 0.0); n]),
        Some("identity") => GateMatrix::identity(n),
        Some("hadamard") => {
            if !n.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "hadamard needs a power-of-two dimension, got {n}"
                )));
            }
            hadamard_matrix(n.trailing_zeros())
        }
        Some(path) => io::read_matrix(Path::new(path))?,
    };
    if m.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {0}x{0} but the lattice dimension is {n}",
            m.dim()
        )));
    }
    let field = pipeline_field_at(&u, &m, &pipeline, plane)?;
    export_field_files(&field, out)
}

fn parse_state_spec(state: &str, n: usize) -> Result<StateVector> {
    if state == "uniform" {
        let s = 1.0 / (n as f64).sqrt();
        return Ok(StateVector::new(vec![Complex64::new(s, 0.0); n]));
    }
    if let Some(k) = state.strip_prefix("hadamard:") {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad basis index '{k}'")))?;
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "hadamard states need a power-of-two dimension, got {n}"
            )));
        }
        return hadamard_basis_state(n.trailing_zeros(), k);
    }
    if let Some(path) = state.strip_prefix("vector:") {
        let u = io::read_vector(Path::new(path))?;
        if u.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs lattice dimension {n}",
                u.dim()
            )));
        }
        return Ok(u);
    }
    Err(Error::Parse(format!(
        "unknown state spec '{state}' (expected uniform | hadamard:K | cell:J,K | vector:FILE)"
    )))
}

fn export_field_files(field: &crate::lattice::Field, out: &mut Outputs) -> Result<()> {
    out.write_pgm("field.pgm", field)?;
    out.write_png("field.png", field)?;
    io::write_field_csv(&out.dir.join("field.csv"), field)?;
    out.record("field.csv", None);
    println!(
        "exported {0}x{0} px field (power {1:.6e}) to field.pgm / field.png / field.csv",
        field.grid_px(),
        field.power()
    );
    Ok(())
}
