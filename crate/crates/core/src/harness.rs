//! Monte Carlo sweeps over SNR: frame error rate, query counts, and the
//! architecture's latency and modeled throughput.
//!
//! Frames are simulated in fixed-size batches. Batch `b` of SNR point `p`
//! draws from substream `(seed, p << 32 | b)`, and batches are launched in
//! rounds of 1, 1, 2, 4, … until the stop rule holds, so the result only
//! depends on the seed and never on the worker count.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;

use crate::channel::{substream, transmit_hard, ChannelConfig};
use crate::code::{load_parity_check, CrcSpec, LinearCode};
use crate::dial::{self, worst_case_cycles};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::grand::{grandab_decode, DecodeResult, GrandConfig};

pub const DEFAULT_CLOCK_MHZ: f64 = 500.0;
pub const DEFAULT_MIN_ERRORS: u64 = 100;
pub const BATCH_FRAMES: u64 = 256;
const MAX_ROUND_BATCHES: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    Crc(CrcSpec),
    HFile(PathBuf),
}

impl CodeSource {
    pub fn build(&self) -> Result<LinearCode> {
        match self {
            CodeSource::Crc(spec) => LinearCode::crc(spec),
            CodeSource::HFile(path) => LinearCode::from_parity_check(&load_parity_check(path)?),
        }
    }
}

impl FromStr for CodeSource {
    type Err = Error;

    /// `crc:n,k,poly` or a path to a parity-check file.
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("crc:") {
            Some(rest) => Ok(CodeSource::Crc(rest.parse()?)),
            None => Ok(CodeSource::HFile(PathBuf::from(s))),
        }
    }
}

/// Which decoder drives the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderChoice {
    /// Architecture model only. `avg_queries` counts evaluated lanes.
    Dial,
    /// Serial reference only. Latency columns are NaN.
    Reference,
    /// Both; frames follow the dial model, queries follow the reference,
    /// and every frame is cross-checked.
    Both,
}

impl FromStr for DecoderChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dial" => Ok(DecoderChoice::Dial),
            "ref" | "reference" => Ok(DecoderChoice::Reference),
            "both" => Ok(DecoderChoice::Both),
            other => Err(Error::Config(format!(
                "unknown decoder {other:?} (expected dial, ref or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimJob {
    pub ab: usize,
    pub snr_points: Vec<f64>,
    pub min_errors: u64,
    pub max_frames: u64,
    pub clock_mhz: f64,
    pub decoder: DecoderChoice,
    pub seed: u64,
    /// Send every frame through a noiseless channel.
    pub noiseless: bool,
}

impl SimJob {
    pub fn new(ab: usize, snr_points: Vec<f64>) -> Self {
        SimJob {
            ab,
            snr_points,
            min_errors: DEFAULT_MIN_ERRORS,
            max_frames: 10_000_000,
            clock_mhz: DEFAULT_CLOCK_MHZ,
            decoder: DecoderChoice::Both,
            seed: 0,
            noiseless: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_points.is_empty() {
            return Err(Error::Config("at least one SNR point is required".into()));
        }
        if self.min_errors < 1 {
            return Err(Error::Config("min errors must be at least 1".into()));
        }
        if self.max_frames < 1 {
            return Err(Error::Config("max frames must be at least 1".into()));
        }
        if !(self.clock_mhz > 0.0) {
            return Err(Error::Config("clock frequency must be positive".into()));
        }
        if self.decoder != DecoderChoice::Reference && !(1..=3).contains(&self.ab) {
            return Err(Error::UnsupportedWeight(self.ab));
        }
        Ok(())
    }
}

/// Aggregates for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub avg_queries: f64,
    pub avg_latency_cycles: f64,
    pub wc_latency_cycles: u64,
    pub avg_info_tput_mbps: f64,
    pub wc_info_tput_mbps: f64,
    /// The frame cap was hit before `min_errors` frame errors.
    pub low_confidence: bool,
    /// Frames where dial and reference disagreed on status or weight.
    pub disagreements: u64,
}

impl SimStats {
    /// Normal-approximation standard error of the FER estimate.
    pub fn fer_std_error(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        (self.fer * (1.0 - self.fer) / self.frames as f64).sqrt()
    }
}

pub const CSV_HEADER: &str = "snr_db,frames,frame_errors,fer,avg_queries,avg_latency_cycles,\
wc_latency_cycles,avg_info_tput_mbps,wc_info_tput_mbps";

/// Information throughput in Mbps for `k` bits every `cycles` cycles.
pub fn throughput(k: usize, cycles: f64, clock_mhz: f64) -> Result<f64> {
    if !(cycles > 0.0) {
        return Err(Error::Config(format!(
            "throughput needs a positive cycle count, got {cycles}"
        )));
    }
    Ok(k as f64 * clock_mhz / cycles)
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    queries: u64,
    latency: u64,
    disagreements: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            frame_errors: self.frame_errors + o.frame_errors,
            queries: self.queries + o.queries,
            latency: self.latency + o.latency,
            disagreements: self.disagreements + o.disagreements,
        }
    }
}

fn random_message(k: usize, rng: &mut impl RngCore) -> BitVector {
    let words = (0..k.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitVector::from_words(words, k)
}

fn frame_failed(res: &DecodeResult, message: &BitVector) -> bool {
    res.message.as_ref() != Some(message)
}

fn run_batch(
    code: &LinearCode,
    job: &SimJob,
    channel: &ChannelConfig,
    point: usize,
    batch: u64,
    frames: u64,
) -> Result<Tally> {
    let mut rng = substream(job.seed, (point as u64) << 32 | batch);
    let cfg = GrandConfig::new(job.ab);
    let mut t = Tally::default();
    for _ in 0..frames {
        let message = random_message(code.k(), &mut rng);
        let c = code.encode(&message)?;
        let r = transmit_hard(&c, channel, &mut rng);
        let (failed, queries, latency) = match job.decoder {
            DecoderChoice::Dial => {
                let res = dial::decode(code, &r, cfg)?;
                (frame_failed(&res, &message), res.queries, res.latency_cycles)
            }
            DecoderChoice::Reference => {
                let res = grandab_decode(code, &r, cfg)?;
                (frame_failed(&res, &message), res.queries, 0)
            }
            DecoderChoice::Both => {
                let hw = dial::decode(code, &r, cfg)?;
                let sw = grandab_decode(code, &r, cfg)?;
                if hw.status != sw.status || hw.weight != sw.weight {
                    t.disagreements += 1;
                }
                (frame_failed(&hw, &message), sw.queries, hw.latency_cycles)
            }
        };
        t.frames += 1;
        t.frame_errors += failed as u64;
        t.queries += queries;
        t.latency += latency;
    }
    Ok(t)
}

/// Simulates one SNR point until the stop rule holds.
pub fn run_point(code: &LinearCode, job: &SimJob, point: usize) -> Result<SimStats> {
    let snr_db = job.snr_points[point];
    let channel = if job.noiseless {
        ChannelConfig::noiseless()
    } else {
        ChannelConfig::awgn(snr_db)
    };
    let mut total = Tally::default();
    let mut next_batch = 0u64;
    let mut round = 1u64;
    while total.frame_errors < job.min_errors && total.frames < job.max_frames {
        let remaining = job.max_frames - total.frames;
        let batches: Vec<(u64, u64)> = (0..round)
            .map(|i| next_batch + i)
            .scan(remaining, |left, b| {
                (*left > 0).then(|| {
                    let f = BATCH_FRAMES.min(*left);
                    *left -= f;
                    (b, f)
                })
            })
            .collect();
        next_batch += batches.len() as u64;
        let tally = batches
            .par_iter()
            .map(|&(b, f)| run_batch(code, job, &channel, point, b, f))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        total = total.merge(tally);
        round = (round * 2).min(MAX_ROUND_BATCHES);
        if total.frames == 0 {
            break;
        }
    }
    stats_from(code, job, snr_db, &total)
}

fn stats_from(code: &LinearCode, job: &SimJob, snr_db: f64, t: &Tally) -> Result<SimStats> {
    let frames = t.frames.max(1) as f64;
    let (wc, avg_latency) = match job.decoder {
        DecoderChoice::Reference => (0, f64::NAN),
        _ => (
            worst_case_cycles(code.n(), job.ab)?,
            t.latency as f64 / frames,
        ),
    };
    let tput = |cycles: f64| {
        if cycles.is_nan() {
            Ok(f64::NAN)
        } else {
            throughput(code.k(), cycles, job.clock_mhz)
        }
    };
    Ok(SimStats {
        snr_db,
        frames: t.frames,
        frame_errors: t.frame_errors,
        fer: t.frame_errors as f64 / frames,
        avg_queries: t.queries as f64 / frames,
        avg_latency_cycles: avg_latency,
        wc_latency_cycles: wc,
        avg_info_tput_mbps: tput(avg_latency)?,
        wc_info_tput_mbps: if wc == 0 { f64::NAN } else { tput(wc as f64)? },
        low_confidence: t.frame_errors < job.min_errors,
        disagreements: t.disagreements,
    })
}

/// Runs every SNR point of `job`.
pub fn run_sweep(code: &LinearCode, job: &SimJob) -> Result<Vec<SimStats>> {
    job.validate()?;
    (0..job.snr_points.len())
        .map(|p| run_point(code, job, p))
        .collect()
}

/// Parses `a:step:b` (inclusive) or a single value.
pub fn parse_snr_range(s: &str) -> Result<Vec<f64>> {
    let nums: Vec<f64> = s
        .split(':')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("SNR {t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [v] => Ok(vec![*v]),
        [a, step, b] => {
            if !(*step > 0.0) || b < a {
                return Err(Error::Config(format!("bad SNR range {s:?}")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(Error::Parse(format!("SNR range must be a:step:b, got {s:?}"))),
    }
}

/// Default grid 4:0.5:12 dB.
pub fn default_snr_grid() -> Vec<f64> {
    parse_snr_range("4:0.5:12").expect("valid literal")
}

/// CSV text: header, then one row per point.
pub fn format_csv(stats: &[SimStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in stats {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.snr_db,
            s.frames,
            s.frame_errors,
            s.fer,
            s.avg_queries,
            s.avg_latency_cycles,
            s.wc_latency_cycles,
            s.avg_info_tput_mbps,
            s.wc_info_tput_mbps
        )
        .unwrap();
    }
    out
}

pub fn emit_csv(stats: &[SimStats], path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(format_csv(stats).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::BENCHMARK_CRC_CODES;

    #[test]
    fn table_throughputs() {
        let expected = [11.71, 12.68, 13.66, 14.64];
        for (spec, want) in BENCHMARK_CRC_CODES.iter().zip(expected) {
            let got = throughput(spec.k, 4098.0, 500.0).unwrap();
            assert!((got - want).abs() <= 0.01, "k={} got {got}", spec.k);
        }
        assert_eq!(throughput(77, 1.0, 500.0).unwrap(), 500.0 * 77.0);
        assert!(throughput(96, 0.0, 500.0).is_err());
    }

    #[test]
    fn snr_ranges() {
        assert_eq!(parse_snr_range("6:1:9").unwrap(), vec![6.0, 7.0, 8.0, 9.0]);
        assert_eq!(parse_snr_range("7.5").unwrap(), vec![7.5]);
        assert_eq!(default_snr_grid().len(), 17);
        let g = parse_snr_range("6:0.1:7").unwrap();
        assert_eq!(g.len(), 11);
        assert!(parse_snr_range("6:0:7").is_err());
        assert!(parse_snr_range("9:1:6").is_err());
        assert!(parse_snr_range("a:b").is_err());
    }

    #[test]
    fn code_source_parsing() {
        assert_eq!(
            "crc:128,120,0xD5".parse::<CodeSource>().unwrap(),
            CodeSource::Crc(CrcSpec::new(128, 120, 0xD5))
        );
        assert_eq!(
            "h.txt".parse::<CodeSource>().unwrap(),
            CodeSource::HFile(PathBuf::from("h.txt"))
        );
        assert!("crc:1,2".parse::<CodeSource>().is_err());
        assert!("fast".parse::<DecoderChoice>().is_err());
    }

    #[test]
    fn job_validation() {
        assert!(SimJob::new(3, vec![]).validate().is_err());
        let mut job = SimJob::new(3, vec![5.0]);
        job.min_errors = 0;
        assert!(job.validate().is_err());
        assert!(SimJob::new(4, vec![5.0]).validate().is_err());
        let mut job = SimJob::new(4, vec![5.0]);
        job.decoder = DecoderChoice::Reference;
        assert!(job.validate().is_ok());
    }

    #[test]
    fn noiseless_sweep_is_error_free_with_unit_latency() {
        let code = LinearCode::crc(&BENCHMARK_CRC_CODES[1]).unwrap();
        let mut job = SimJob::new(3, vec![8.0]);
        job.noiseless = true;
        job.max_frames = 1000;
        let stats = run_sweep(&code, &job).unwrap();
        let s = &stats[0];
        assert_eq!((s.frames, s.frame_errors, s.fer), (1000, 0, 0.0));
        assert_eq!(s.avg_latency_cycles, 1.0);
        assert_eq!(s.avg_queries, 1.0);
        assert!(s.low_confidence);
        assert_eq!(s.avg_info_tput_mbps, 104.0 * 500.0);
    }

    #[test]
    fn sweep_is_deterministic_and_respects_caps() {
        let code = LinearCode::crc(&BENCHMARK_CRC_CODES[3]).unwrap();
        let mut job = SimJob::new(3, vec![5.0, 6.0]);
        job.min_errors = 20;
        job.max_frames = 3000;
        job.seed = 99;
        let a = run_sweep(&code, &job).unwrap();
        let b = run_sweep(&code, &job).unwrap();
        assert_eq!(a, b);
        for s in &a {
            assert!(s.frames <= 3000);
            assert!(s.frame_errors >= 20 || s.frames == 3000);
            assert_eq!(s.disagreements, 0);
            assert!(s.avg_latency_cycles >= 1.0);
            assert!(s.avg_latency_cycles <= s.wc_latency_cycles as f64);
            assert_eq!(s.fer, s.frame_errors as f64 / s.frames as f64);
        }
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&code, &job).unwrap());
        assert_eq!(single, a);
    }

    #[test]
    fn csv_layout() {
        assert_eq!(format_csv(&[]), format!("{CSV_HEADER}\n"));
        let s = SimStats {
            snr_db: 8.5,
            frames: 10,
            frame_errors: 1,
            fer: 0.1,
            avg_queries: 2.5,
            avg_latency_cycles: 1.5,
            wc_latency_cycles: 4098,
            avg_info_tput_mbps: 40000.0,
            wc_info_tput_mbps: 14.64,
            low_confidence: false,
            disagreements: 0,
        };
        let text = format_csv(&[s]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(text.ends_with('\n'));
        assert_eq!(lines[1].split(',').count(), 9);
        assert_eq!(lines[0].split(',').count(), 9);
        assert_eq!(lines[1], "8.5,10,1,0.1,2.5,1.5,4098,40000,14.64");
    }
}
