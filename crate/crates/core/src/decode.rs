//! Syndrome belief propagation over GF(2^m).
//!
//! Messages live in the probability domain. A variable-to-check message is
//! stored indexed by the check-domain value `h * x`, and the check update is a
//! convolution over the additive group of the field, computed with the
//! Walsh-Hadamard transform. Every message is floored at [`FLOOR`] and
//! normalized in the check domain, so relabeling a column permutes the
//! messages without changing any of their values.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::qmatrix::SparseQMatrix;

/// Smallest value kept in any message component.
pub const FLOOR: f64 = 1e-30;

/// Probability vector over the `q` values of one symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct Prior {
    probs: Vec<f64>,
}

impl Prior {
    /// Checks that `probs` is a distribution over a field of size `2^m`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if !probs.len().is_power_of_two() || probs.len() < 2 {
            return Err(Error::InvalidParameter(format!("prior of length {}", probs.len())));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidParameter("negative or NaN prior component".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("prior sums to {total}")));
        }
        Ok(Prior { probs })
    }

    /// Prior induced on a symbol when each of its `m` bits flips
    /// independently with probability `p_bit`.
    pub fn from_bsc(p_bit: f64, m: u32) -> Result<Self> {
        Self::from_bsc_in(p_bit, m, |a| a)
    }

    /// As [`Prior::from_bsc`] when the channel acts on the bits of
    /// `coords(a)` rather than on the coefficient bits of `a`.
    pub fn from_bsc_in(p_bit: f64, m: u32, coords: impl Fn(Elem) -> Elem) -> Result<Self> {
        if !(0.0..0.5).contains(&p_bit) {
            return Err(Error::InvalidParameter(format!("bit-flip probability {p_bit} outside [0, 0.5)")));
        }
        if m == 0 || m > crate::gf::MAX_DEGREE {
            return Err(Error::InvalidParameter(format!("extension degree {m}")));
        }
        let q = 1usize << m;
        let probs: Vec<f64> = (0..q)
            .map(|a| {
                let w = coords(a as Elem).count_ones() as i32;
                p_bit.powi(w) * (1.0 - p_bit).powi(m as i32 - w)
            })
            .collect();
        let total: f64 = probs.iter().sum();
        Ok(Prior { probs: probs.into_iter().map(|p| p / total).collect() })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn q(&self) -> usize {
        self.probs.len()
    }
}

/// Alias kept for call sites that read better with the operation name.
pub fn prior_from_bsc(p_bit: f64, m: u32) -> Result<Prior> {
    Prior::from_bsc(p_bit, m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoderConfig {
    pub max_iters: usize,
    /// Weight of the new check message; 1.0 disables damping.
    pub damping: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { max_iters: 100, damping: 1.0 }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!("damping {} outside (0, 1]", self.damping)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpResult {
    pub estimate: Vec<Elem>,
    pub converged: bool,
    pub iterations: usize,
}

/// Tanner graph of `H` prepared for repeated decoding.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    field: Arc<Field>,
    q: usize,
    rows: usize,
    cols: usize,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
    /// `perm[e * q + x] = h_e * x`.
    perm: Vec<u16>,
}

/// In-place unnormalized Walsh-Hadamard transform.
fn wht(x: &mut [f64]) {
    let n = x.len();
    if n == 2 {
        let (a, b) = (x[0], x[1]);
        x[0] = a + b;
        x[1] = a - b;
        return;
    }
    // the first two butterfly levels in one pass
    for c in x.chunks_exact_mut(4) {
        let (s0, d0) = (c[0] + c[1], c[0] - c[1]);
        let (s1, d1) = (c[2] + c[3], c[2] - c[3]);
        c[0] = s0 + s1;
        c[1] = d0 + d1;
        c[2] = s0 - s1;
        c[3] = d0 - d1;
    }
    let mut h = 4;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

fn floor_normalize(x: &mut [f64]) {
    let mut total = 0.0;
    for v in x.iter_mut() {
        // f64::max maps NaN to the floor as well
        *v = v.max(FLOOR);
        total += *v;
    }
    let inv = 1.0 / total;
    for v in x.iter_mut() {
        *v *= inv;
    }
}

fn argmax(x: &[f64]) -> Elem {
    let mut best = 0;
    for (i, &v) in x.iter().enumerate().skip(1) {
        if v > x[best] {
            best = i;
        }
    }
    best as Elem
}

/// Message and scratch buffers, resized on each decode so one can serve any decoder.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    /// Variable-to-check messages, check domain.
    vc: Vec<f64>,
    /// Check-to-variable messages, variable domain.
    cv: Vec<f64>,
    posterior: Vec<f64>,
    transforms: Vec<f64>,
    suffix: Vec<f64>,
    prefix: Vec<f64>,
    out: Vec<f64>,
    acc: Vec<f64>,
    estimate: Vec<Elem>,
}

impl BpDecoder {
    pub fn new(h: &SparseQMatrix) -> Self {
        let field = h.field().clone();
        let q = field.q();
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut var_edges = vec![Vec::new(); h.cols()];
        let mut perm = Vec::with_capacity(h.nnz() * q);
        for i in 0..h.rows() {
            check_start.push(edge_var.len());
            for &(j, a) in h.row(i) {
                var_edges[j].push(edge_var.len());
                edge_var.push(j);
                perm.extend((0..q).map(|x| field.mul(a, x as Elem)));
            }
        }
        check_start.push(edge_var.len());
        BpDecoder { field, q, rows: h.rows(), cols: h.cols(), check_start, edge_var, var_edges, perm }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    fn perm(&self, e: usize) -> &[u16] {
        &self.perm[e * self.q..(e + 1) * self.q]
    }

    fn check_inputs(&self, syndrome: &[Elem], priors: &[Prior]) -> Result<()> {
        if syndrome.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for {} checks",
                syndrome.len(),
                self.rows
            )));
        }
        if syndrome.iter().any(|&s| !self.field.contains(s)) {
            return Err(Error::InvalidParameter("syndrome symbol outside the field".into()));
        }
        if priors.len() != 1 && priors.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} priors for {} symbols",
                priors.len(),
                self.cols
            )));
        }
        if priors.iter().any(|p| p.q() != self.q) {
            return Err(Error::DimensionMismatch("prior length differs from field size".into()));
        }
        Ok(())
    }

    fn prior<'a>(&self, priors: &'a [Prior], j: usize) -> &'a [f64] {
        if priors.len() == 1 {
            priors[0].probs()
        } else {
            priors[j].probs()
        }
    }

    fn init(&self, ws: &mut Workspace, priors: &[Prior]) {
        let q = self.q;
        let ne = self.num_edges();
        ws.vc.resize(ne * q, 0.0);
        for e in 0..ne {
            let p = self.prior(priors, self.edge_var[e]);
            let msg = &mut ws.vc[e * q..(e + 1) * q];
            for (x, &y) in self.perm(e).iter().enumerate() {
                msg[y as usize] = p[x];
            }
            floor_normalize(msg);
        }
        ws.cv.clear();
        ws.cv.resize(ne * q, 1.0 / q as f64);
        ws.posterior.clear();
        for j in 0..self.cols {
            ws.posterior.extend_from_slice(self.prior(priors, j));
        }
        ws.prefix.resize(q, 0.0);
        ws.out.resize(q, 0.0);
        ws.acc.resize(q, 0.0);
        ws.estimate.resize(self.cols, 0);
    }

    /// Binary case: the transform of `(p0, p1)` is `(1, p0 - p1)`.
    fn check_update_binary(&self, ws: &mut Workspace, syndrome: &[Elem], damping: f64) {
        let Workspace { vc, cv, suffix, .. } = ws;
        for c in 0..self.rows {
            let (a, b) = (self.check_start[c], self.check_start[c + 1]);
            suffix.clear();
            suffix.extend((a..b).map(|e| vc[2 * e] - vc[2 * e + 1]));
            let d = b - a;
            let mut prefix = 1.0;
            // suffix products in place, from the right
            let mut tail = 1.0;
            for k in (0..d).rev() {
                let t = suffix[k];
                suffix[k] = tail;
                tail *= t;
            }
            for k in 0..d {
                let e = a + k;
                let delta = prefix * suffix[k];
                prefix *= vc[2 * e] - vc[2 * e + 1];
                let (mut p0, mut p1) = (0.5 * (1.0 + delta), 0.5 * (1.0 - delta));
                if syndrome[c] == 1 {
                    std::mem::swap(&mut p0, &mut p1);
                }
                let mut msg = [p0, p1];
                floor_normalize(&mut msg);
                let out = &mut cv[2 * e..2 * e + 2];
                if damping >= 1.0 {
                    out.copy_from_slice(&msg);
                } else {
                    out[0] = damping * msg[0] + (1.0 - damping) * out[0];
                    out[1] = damping * msg[1] + (1.0 - damping) * out[1];
                }
            }
        }
    }

    fn check_update(&self, ws: &mut Workspace, syndrome: &[Elem], damping: f64) {
        if self.q == 2 {
            return self.check_update_binary(ws, syndrome, damping);
        }
        let q = self.q;
        let inv_q = 1.0 / q as f64;
        let Workspace { vc, cv, transforms, suffix, prefix, out, acc, .. } = ws;
        for c in 0..self.rows {
            let (a, b) = (self.check_start[c], self.check_start[c + 1]);
            let d = b - a;
            transforms.clear();
            transforms.extend_from_slice(&vc[a * q..b * q]);
            for t in transforms.chunks_exact_mut(q) {
                wht(t);
            }
            // suffix[k] = product of transforms k+1..d
            suffix.clear();
            suffix.resize(d * q, 1.0);
            for k in (0..d.saturating_sub(1)).rev() {
                let (lo, hi) = suffix.split_at_mut((k + 1) * q);
                let next_t = &transforms[(k + 1) * q..(k + 2) * q];
                for ((s, &n), &t) in lo[k * q..].iter_mut().zip(&hi[..q]).zip(next_t) {
                    *s = n * t;
                }
            }
            prefix.iter_mut().for_each(|v| *v = 1.0);
            let s = syndrome[c] as usize;
            for k in 0..d {
                let e = a + k;
                for ((o, &p), &sf) in out.iter_mut().zip(prefix.iter()).zip(&suffix[k * q..(k + 1) * q]) {
                    *o = p * sf;
                }
                wht(out);
                // check-domain message: value y has weight conv(s + y)
                for (y, m) in acc.iter_mut().enumerate() {
                    *m = out[s ^ y] * inv_q;
                }
                floor_normalize(acc);
                let perm = self.perm(e);
                let msg = &mut cv[e * q..(e + 1) * q];
                if damping >= 1.0 {
                    for (v, &y) in msg.iter_mut().zip(perm) {
                        *v = acc[y as usize];
                    }
                } else {
                    for (v, &y) in msg.iter_mut().zip(perm) {
                        *v = damping * acc[y as usize] + (1.0 - damping) * *v;
                    }
                }
                for (p, &t) in prefix.iter_mut().zip(&transforms[k * q..(k + 1) * q]) {
                    *p *= t;
                }
            }
        }
    }

    fn var_update(&self, ws: &mut Workspace, priors: &[Prior]) {
        let q = self.q;
        let Workspace { vc, cv, posterior, acc, .. } = ws;
        for j in 0..self.cols {
            let prior = self.prior(priors, j);
            let edges = &self.var_edges[j];
            for &e in edges {
                acc.copy_from_slice(prior);
                for &other in edges {
                    if other != e {
                        for (a, &m) in acc.iter_mut().zip(&cv[other * q..(other + 1) * q]) {
                            *a *= m;
                        }
                    }
                }
                let msg = &mut vc[e * q..(e + 1) * q];
                for (&a, &y) in acc.iter().zip(self.perm(e)) {
                    msg[y as usize] = a;
                }
                floor_normalize(msg);
            }
            let post = &mut posterior[j * q..(j + 1) * q];
            post.copy_from_slice(prior);
            for &e in edges {
                for (a, &m) in post.iter_mut().zip(&cv[e * q..(e + 1) * q]) {
                    *a *= m;
                }
            }
            let total: f64 = post.iter().sum();
            if total > 0.0 {
                let inv = 1.0 / total;
                post.iter_mut().for_each(|v| *v *= inv);
            }
        }
    }

    fn hard_decision(&self, ws: &mut Workspace) {
        let q = self.q;
        for (j, e) in ws.estimate.iter_mut().enumerate() {
            *e = argmax(&ws.posterior[j * q..(j + 1) * q]);
        }
    }

    fn syndrome_matches(&self, est: &[Elem], syndrome: &[Elem]) -> bool {
        (0..self.rows).all(|c| {
            let mut acc = 0;
            for e in self.check_start[c]..self.check_start[c + 1] {
                acc ^= self.perm(e)[est[self.edge_var[e]] as usize];
            }
            acc == syndrome[c]
        })
    }

    /// Flooding sum-product until the hard decision reproduces `syndrome`.
    ///
    /// `priors` holds either one prior shared by all symbols or one per
    /// symbol. The hard decision taken from the priors alone counts as
    /// iteration 0.
    pub fn decode(&self, syndrome: &[Elem], priors: &[Prior], cfg: &DecoderConfig) -> Result<BpResult> {
        self.decode_in(&mut Workspace::default(), syndrome, priors, cfg)
    }

    /// As [`BpDecoder::decode`], reusing the buffers of `ws`.
    pub fn decode_in(
        &self,
        ws: &mut Workspace,
        syndrome: &[Elem],
        priors: &[Prior],
        cfg: &DecoderConfig,
    ) -> Result<BpResult> {
        cfg.validate()?;
        self.check_inputs(syndrome, priors)?;
        self.init(ws, priors);
        self.hard_decision(ws);
        let mut iterations = 0;
        let mut converged = self.syndrome_matches(&ws.estimate, syndrome);
        while !converged && iterations < cfg.max_iters {
            iterations += 1;
            self.check_update(ws, syndrome, cfg.damping);
            self.var_update(ws, priors);
            self.hard_decision(ws);
            converged = self.syndrome_matches(&ws.estimate, syndrome);
        }
        Ok(BpResult { estimate: ws.estimate.clone(), converged, iterations })
    }

    /// Posterior of every symbol after exactly `iters` iterations.
    pub fn marginals(
        &self,
        syndrome: &[Elem],
        priors: &[Prior],
        iters: usize,
        damping: f64,
    ) -> Result<Vec<Vec<f64>>> {
        DecoderConfig { max_iters: 1, damping }.validate()?;
        self.check_inputs(syndrome, priors)?;
        let mut ws = Workspace::default();
        self.init(&mut ws, priors);
        for _ in 0..iters {
            self.check_update(&mut ws, syndrome, damping);
            self.var_update(&mut ws, priors);
        }
        Ok(ws.posterior.chunks(self.q).map(|c| c.to_vec()).collect())
    }
}

/// One-shot form of [`BpDecoder::decode`].
pub fn bp_decode(h: &SparseQMatrix, syndrome: &[Elem], priors: &[Prior], cfg: &DecoderConfig) -> Result<BpResult> {
    BpDecoder::new(h).decode(syndrome, priors, cfg)
}

/// One-shot form of [`BpDecoder::marginals`] without damping.
pub fn posterior_marginals(
    h: &SparseQMatrix,
    syndrome: &[Elem],
    priors: &[Prior],
    iters: usize,
) -> Result<Vec<Vec<f64>>> {
    BpDecoder::new(h).marginals(syndrome, priors, iters, 1.0)
}
