//! Monte Carlo evaluation over the depolarizing channel.
//!
//! Each trial draws a Pauli error on the `2 m n^2` physical qubits, groups
//! the X and Z parts into q-ary symbols, decodes both halves independently
//! and classifies the residuals. Trials are seeded from
//! `(master seed, p index, trial index)` so a sweep is reproducible
//! regardless of how trials are split across threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decode::{BpDecoder, DecoderConfig, Prior, Workspace};
use crate::error::{Error, Result};
use crate::expand::{contract_vec, expand_vec, DualBasis};
use crate::gf::Elem;
use crate::toric::{ExtendedToricCode, Side};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Every trial whose index is a multiple of this is audited.
pub const AUDIT_PERIOD: u64 = 100;

/// Depolarizing channel with total error probability `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    p: f64,
}

impl ChannelModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..0.75).contains(&p) {
            return Err(Error::InvalidParameter(format!("depolarizing probability {p} outside [0, 0.75)")));
        }
        Ok(ChannelModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Marginal flip probability of each of the X and Z parts.
    pub fn p_bit(&self) -> f64 {
        2.0 * self.p / 3.0
    }
}

/// Draws X and Z bit vectors: X, Z and Y each with probability `p / 3`.
pub fn sample_error<R: Rng>(n_qubits: usize, channel: ChannelModel, rng: &mut R) -> (Vec<u8>, Vec<u8>) {
    let third = channel.p / 3.0;
    let mut ex = vec![0u8; n_qubits];
    let mut ez = vec![0u8; n_qubits];
    for (x, z) in ex.iter_mut().zip(ez.iter_mut()) {
        let u: f64 = rng.gen();
        if u < third {
            *x = 1;
        } else if u < 2.0 * third {
            *z = 1;
        } else if u < channel.p {
            *x = 1;
            *z = 1;
        }
    }
    (ex, ez)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideOutcome {
    /// Residual is a stabilizer.
    Success,
    /// Decoder matched the syndrome but the residual is a nontrivial logical.
    Logical,
    /// Decoder stopped without matching the syndrome.
    Unconverged,
}

impl SideOutcome {
    pub fn is_failure(self) -> bool {
        self != SideOutcome::Success
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Correction of the X part (syndrome under `H_Z`).
    pub x_side: SideOutcome,
    /// Correction of the Z part (syndrome under `H_X`).
    pub z_side: SideOutcome,
    /// Physical qubits whose residual Pauli is not the identity.
    pub residual_qubits: usize,
    /// Audited sides: whether the slow classification disagreed.
    pub audit_mismatches: Option<usize>,
}

impl TrialOutcome {
    pub fn is_word_error(&self) -> bool {
        self.x_side.is_failure() || self.z_side.is_failure()
    }
}

/// Decoders for both halves of one code at one channel parameter.
///
/// The binary `H_Z` carries transposed blocks, so the X part of an error is
/// read in the trace-dual basis and its prior uses dual-coordinate weights.
pub struct TrialRunner<'a> {
    code: &'a ExtendedToricCode,
    dual: DualBasis,
    dec_hz: BpDecoder,
    dec_hx: BpDecoder,
    prior_x: [Prior; 1],
    prior_z: [Prior; 1],
    channel: ChannelModel,
    cfg: DecoderConfig,
}

impl<'a> TrialRunner<'a> {
    pub fn new(code: &'a ExtendedToricCode, channel: ChannelModel, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let dual = DualBasis::new(code.field());
        let prior_x = Prior::from_bsc_in(channel.p_bit(), code.m(), |a| dual.coords(a))?;
        let prior_z = Prior::from_bsc(channel.p_bit(), code.m())?;
        Ok(TrialRunner {
            code,
            dual,
            dec_hz: BpDecoder::new(code.matrix(Side::Z)),
            dec_hx: BpDecoder::new(code.matrix(Side::X)),
            prior_x: [prior_x],
            prior_z: [prior_z],
            channel,
            cfg,
        })
    }

    /// Binary image of a q-ary X-part (dual basis).
    pub fn expand_x(&self, v: &[Elem]) -> Vec<u8> {
        self.dual.expand_vec(v)
    }

    /// Binary image of a q-ary Z-part (coefficient basis).
    pub fn expand_z(&self, v: &[Elem]) -> Vec<u8> {
        expand_vec(self.code.field(), v)
    }

    /// Decodes one half; returns the outcome, the residual and, when
    /// `audit` is set, whether the two classifications disagreed.
    fn decode_side(
        &self,
        ws: &mut Workspace,
        side: Side,
        err: &[Elem],
        audit: bool,
    ) -> Result<(SideOutcome, Vec<Elem>, bool)> {
        let (h, dec, prior) = match side {
            Side::Z => (self.code.matrix(Side::Z), &self.dec_hz, &self.prior_x),
            Side::X => (self.code.matrix(Side::X), &self.dec_hx, &self.prior_z),
        };
        let syndrome = h.apply(err)?;
        let res = dec.decode_in(ws, &syndrome, prior, &self.cfg)?;
        let residual: Vec<Elem> = err.iter().zip(&res.estimate).map(|(a, b)| a ^ b).collect();
        if !res.converged {
            return Ok((SideOutcome::Unconverged, residual, false));
        }
        let logical = self.code.logical_by_pairing(&residual, side);
        let mismatch = audit && self.code.logical_by_rowspace(&residual, side) != logical;
        let outcome = if logical { SideOutcome::Logical } else { SideOutcome::Success };
        Ok((outcome, residual, mismatch))
    }

    /// Runs one trial on an explicit binary error.
    pub fn run_on(&self, ex: &[u8], ez: &[u8], audit: bool) -> Result<TrialOutcome> {
        self.run_on_in(&mut Workspace::default(), ex, ez, audit)
    }

    /// As [`TrialRunner::run_on`], reusing decoder buffers.
    pub fn run_on_in(&self, ws: &mut Workspace, ex: &[u8], ez: &[u8], audit: bool) -> Result<TrialOutcome> {
        let exq = self.dual.contract_vec(ex)?;
        let ezq = contract_vec(self.code.field(), ez)?;
        let (x_side, rx, mx) = self.decode_side(ws, Side::Z, &exq, audit)?;
        let (z_side, rz, mz) = self.decode_side(ws, Side::X, &ezq, audit)?;
        let bx = self.expand_x(&rx);
        let bz = self.expand_z(&rz);
        let residual_qubits = bx.iter().zip(&bz).filter(|(a, b)| **a | **b != 0).count();
        Ok(TrialOutcome {
            x_side,
            z_side,
            residual_qubits,
            audit_mismatches: audit.then_some(mx as usize + mz as usize),
        })
    }

    /// Samples an error and runs one trial.
    pub fn run<R: Rng>(&self, rng: &mut R, audit: bool) -> Result<TrialOutcome> {
        self.run_in(&mut Workspace::default(), rng, audit)
    }

    pub fn run_in<R: Rng>(&self, ws: &mut Workspace, rng: &mut R, audit: bool) -> Result<TrialOutcome> {
        let (ex, ez) = sample_error(self.code.num_qubits(), self.channel, rng);
        self.run_on_in(ws, &ex, &ez, audit)
    }
}

/// Single trial with freshly prepared decoders.
pub fn run_trial<R: Rng>(
    code: &ExtendedToricCode,
    channel: ChannelModel,
    cfg: &DecoderConfig,
    rng: &mut R,
) -> Result<TrialOutcome> {
    TrialRunner::new(code, channel, *cfg)?.run(rng, false)
}

/// Generator for trial `trial` at grid point `p_index`.
pub fn trial_rng(master_seed: u64, p_index: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((p_index as u64) << 32) | (trial & 0xffff_ffff));
    rng
}

/// Counts for one grid point. Merging is plain addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    pub word_errors: u64,
    pub x_word_errors: u64,
    pub z_word_errors: u64,
    pub nonconverged: u64,
    pub residual_qubits: u64,
    pub audited: u64,
    pub audit_mismatches: u64,
}

impl Tally {
    pub fn record(&mut self, t: &TrialOutcome) {
        self.trials += 1;
        self.word_errors += t.is_word_error() as u64;
        self.x_word_errors += t.x_side.is_failure() as u64;
        self.z_word_errors += t.z_side.is_failure() as u64;
        self.nonconverged +=
            (t.x_side == SideOutcome::Unconverged || t.z_side == SideOutcome::Unconverged) as u64;
        self.residual_qubits += t.residual_qubits as u64;
        if let Some(k) = t.audit_mismatches {
            self.audited += 1;
            self.audit_mismatches += k as u64;
        }
    }

    pub fn merge(mut self, o: Tally) -> Tally {
        self.trials += o.trials;
        self.word_errors += o.word_errors;
        self.x_word_errors += o.x_word_errors;
        self.z_word_errors += o.z_word_errors;
        self.nonconverged += o.nonconverged;
        self.residual_qubits += o.residual_qubits;
        self.audited += o.audited;
        self.audit_mismatches += o.audit_mismatches;
        self
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Results at one value of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub p: f64,
    pub tally: Tally,
    pub n_qubits: usize,
}

impl SimPoint {
    pub fn wer(&self) -> f64 {
        self.tally.word_errors as f64 / self.tally.trials as f64
    }

    pub fn wer_interval(&self) -> (f64, f64) {
        wilson_interval(self.tally.word_errors, self.tally.trials, Z95)
    }

    pub fn qer(&self) -> f64 {
        self.tally.residual_qubits as f64 / (self.tally.trials as f64 * self.n_qubits as f64)
    }
}

/// Description of a sweep over a grid of depolarizing probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub p_grid: Vec<f64>,
    pub trials: u64,
    pub decoder: DecoderConfig,
    pub master_seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.trials > 1 << 32 {
            return Err(Error::InvalidParameter("at most 2^32 trials per point".into()));
        }
        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("empty probability grid".into()));
        }
        for &p in &self.p_grid {
            ChannelModel::new(p)?;
        }
        self.decoder.validate()
    }
}

/// A completed sweep on one code.
#[derive(Clone, Debug, PartialEq)]
pub struct SimStats {
    pub n: usize,
    pub m: u32,
    pub code_seed: u64,
    pub poly: u32,
    pub config: SimConfig,
    pub points: Vec<SimPoint>,
}

#[derive(Serialize)]
struct CsvRow {
    p: f64,
    trials: u64,
    wer: f64,
    wer_lo: f64,
    wer_hi: f64,
    qer: f64,
    x_word_errors: u64,
    z_word_errors: u64,
    nonconverged: u64,
    seed: u64,
    n: usize,
    m: u32,
    max_iters: usize,
}

/// Metadata written next to the CSV.
#[derive(Clone, Debug, Serialize)]
pub struct SweepMeta {
    pub n: usize,
    pub m: u32,
    pub poly: u32,
    pub code_seed: u64,
    pub master_seed: u64,
    pub max_iters: usize,
    pub damping: f64,
    pub schedule: &'static str,
    pub qer_definition: &'static str,
    pub audited_trials: u64,
    pub audit_mismatches: u64,
}

impl SimStats {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for pt in &self.points {
            let (lo, hi) = pt.wer_interval();
            w.serialize(CsvRow {
                p: pt.p,
                trials: pt.tally.trials,
                wer: pt.wer(),
                wer_lo: lo,
                wer_hi: hi,
                qer: pt.qer(),
                x_word_errors: pt.tally.x_word_errors,
                z_word_errors: pt.tally.z_word_errors,
                nonconverged: pt.tally.nonconverged,
                seed: self.config.master_seed,
                n: self.n,
                m: self.m,
                max_iters: self.config.decoder.max_iters,
            })
            .map_err(|e| Error::Parse(format!("csv: {e}")))?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn meta(&self) -> SweepMeta {
        SweepMeta {
            n: self.n,
            m: self.m,
            poly: self.poly,
            code_seed: self.code_seed,
            master_seed: self.config.master_seed,
            max_iters: self.config.decoder.max_iters,
            damping: self.config.decoder.damping,
            schedule: "flooding",
            qer_definition: "fraction of physical qubits with a non-identity residual Pauli after decoding both halves",
            audited_trials: self.points.iter().map(|p| p.tally.audited).sum(),
            audit_mismatches: self.points.iter().map(|p| p.tally.audit_mismatches).sum(),
        }
    }
}

/// Runs trials `range` of grid point `p_index` and sums their counts.
pub fn run_trials(
    runner: &TrialRunner<'_>,
    master_seed: u64,
    p_index: usize,
    range: std::ops::Range<u64>,
) -> Result<Tally> {
    range
        .into_par_iter()
        .map_init(Workspace::default, |ws, t| {
            let mut rng = trial_rng(master_seed, p_index, t);
            runner.run_in(ws, &mut rng, t % AUDIT_PERIOD == 0)
        })
        .try_fold(Tally::default, |mut acc, r| {
            acc.record(&r?);
            Ok(acc)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// Sweeps the grid of `cfg` on `code`.
pub fn run_sweep_on(code: &ExtendedToricCode, cfg: &SimConfig) -> Result<SimStats> {
    cfg.validate()?;
    let mut points = Vec::with_capacity(cfg.p_grid.len());
    for (idx, &p) in cfg.p_grid.iter().enumerate() {
        let runner = TrialRunner::new(code, ChannelModel::new(p)?, cfg.decoder)?;
        let tally = run_trials(&runner, cfg.master_seed, idx, 0..cfg.trials)?;
        points.push(SimPoint { p, tally, n_qubits: code.num_qubits() });
    }
    Ok(SimStats {
        n: code.n(),
        m: code.m(),
        code_seed: code.seed(),
        poly: code.field().poly(),
        config: cfg.clone(),
        points,
    })
}

/// Builds the extended toric code `(n, m, code_seed)` and sweeps it.
pub fn run_sweep(n: usize, m: u32, code_seed: u64, cfg: &SimConfig) -> Result<SimStats> {
    let code = ExtendedToricCode::build(n, m, code_seed)?;
    run_sweep_on(&code, cfg)
}
