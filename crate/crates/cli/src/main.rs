use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use grandab_core::code::load_parity_check;
use grandab_core::dial::{self, format_tuple};
use grandab_core::harness::{
    self, format_csv, parse_snr_range, CodeSource, DecoderChoice, SimJob,
};
use grandab_core::{BitVector, GrandConfig, LinearCode};

#[derive(Parser)]
#[command(name = "grandab", version, about = "GRANDAB decoding and dial-architecture simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo FER / query / latency sweep over SNR.
    Simulate(SimulateArgs),
    /// Decode one received word and print the result.
    Decode(DecodeArgs),
    /// Print the per-cycle trace of the dial architecture for one word.
    Trace(DecodeArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CodeArgs {
    /// CRC code as `crc:n,k,poly` (e.g. crc:128,120,0xD5).
    #[arg(long)]
    code: Option<String>,
    /// Parity-check matrix file.
    #[arg(long)]
    hfile: Option<PathBuf>,
}

impl CodeArgs {
    fn build(&self) -> Result<LinearCode> {
        let code = match (&self.code, &self.hfile) {
            (Some(spec), _) => {
                let src: CodeSource = spec.parse()?;
                src.build()?
            }
            (None, Some(path)) => {
                let h = load_parity_check(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                LinearCode::from_parity_check(&h)?
            }
            (None, None) => bail!("either --code or --hfile is required"),
        };
        Ok(code)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 3)]
    ab: usize,
    /// SNR grid `a:step:b` in dB (SNR = -10 log10 sigma^2).
    #[arg(long, default_value = "4:0.5:12")]
    snr: String,
    #[arg(long, default_value_t = harness::DEFAULT_MIN_ERRORS)]
    min_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = harness::DEFAULT_CLOCK_MHZ)]
    clock_mhz: f64,
    /// dial, ref or both.
    #[arg(long, default_value = "both")]
    decoder: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 3)]
    ab: usize,
    /// Received hard decisions as hex, most significant nibble first.
    #[arg(long)]
    rx: String,
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let code = args.code.build()?;
    let job = SimJob {
        ab: args.ab,
        snr_points: parse_snr_range(&args.snr)?,
        min_errors: args.min_errors,
        max_frames: args.max_frames,
        clock_mhz: args.clock_mhz,
        decoder: args.decoder.parse::<DecoderChoice>()?,
        seed: args.seed,
        noiseless: false,
    };
    job.validate()?;
    eprintln!(
        "simulating ({}, {}) code, AB = {}, {} SNR points",
        code.n(),
        code.k(),
        job.ab,
        job.snr_points.len()
    );
    let mut stats = Vec::with_capacity(job.snr_points.len());
    for p in 0..job.snr_points.len() {
        let s = harness::run_point(&code, &job, p)?;
        eprintln!(
            "snr={:.2} frames={} errors={} fer={:.3e} avg_queries={:.2} avg_latency={:.3}{}",
            s.snr_db,
            s.frames,
            s.frame_errors,
            s.fer,
            s.avg_queries,
            s.avg_latency_cycles,
            if s.low_confidence { " (low confidence)" } else { "" }
        );
        if s.disagreements > 0 {
            bail!(
                "dial and reference decoders disagreed on {} frames at {} dB",
                s.disagreements,
                s.snr_db
            );
        }
        stats.push(s);
    }
    match &args.out {
        Some(path) => harness::emit_csv(&stats, path)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", format_csv(&stats)),
    }
    Ok(())
}

fn received(code: &LinearCode, rx: &str) -> Result<BitVector> {
    BitVector::from_hex(rx, code.n()).context("parsing --rx")
}

fn decode(args: &DecodeArgs) -> Result<()> {
    let code = args.code.build()?;
    let r = received(&code, &args.rx)?;
    let res = dial::decode(&code, &r, GrandConfig::new(args.ab))?;
    println!("status={:?}", res.status);
    println!("flipped={}", format_tuple(&res.flipped));
    println!("weight={}", res.weight);
    println!("queries={}", res.queries);
    println!("latency_cycles={}", res.latency_cycles);
    match (&res.codeword, &res.message) {
        (Some(c), Some(m)) => {
            println!("codeword={}", c.to_hex());
            println!("message={}", m.to_hex());
        }
        _ => {
            println!("codeword=-");
            println!("message=-");
        }
    }
    Ok(())
}

fn trace(args: &DecodeArgs) -> Result<()> {
    let code = args.code.build()?;
    let r = received(&code, &args.rx)?;
    let mut state = dial::init(&code, &r, GrandConfig::new(args.ab))?;
    while !state.is_done() {
        let report = state.step()?;
        println!("{report}");
        if report.hit.is_some() {
            break;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Decode(a) => decode(a),
        Command::Trace(a) => trace(a),
    }
}
