//! Posterior archive: a versioned single-file container.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic        8 bytes  "DPMRGARC"
//! version      u32      currently 1
//! header_len   u64
//! header       header_len bytes of UTF-8 JSON (method, hyperparameters,
//!              chain settings, normalisation, column names, draw metadata,
//!              draw and trace counts)
//! draws        n_draws records:
//!                sigma2 f64, alpha f64, k u32, n labels u32,
//!                then per cluster: mu f64, p beta f64,
//!                and p m f64, p tau f64 when covariate params are stored
//! trace        n_trace records: iter u64, sigma2 f64, alpha f64, k u32, loglik f64
//! ```
//!
//! The file must end exactly after the last trace record.

use std::fs;
use std::path::Path;

use dpmreg::experiment::Method;
use dpmreg::model::{
    DrawnCluster, DrawsMeta, Hyperparams, NormState, Partition, PosteriorDraw, PosteriorDraws, TraceRow,
};
use dpmreg::sampler::ChainConfig;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 8] = b"DPMRGARC";
pub const VERSION: u32 = 1;

/// Everything about a fit except the draws themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitInfo {
    pub method: Method,
    pub hyper: Hyperparams,
    pub chain: ChainConfig,
    /// z-score transform learned from the training file; `None` when the
    /// model was fitted on raw values.
    pub norm_state: Option<NormState>,
    pub response_name: String,
    pub covariate_names: Vec<String>,
    pub log_response: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Archive {
    pub info: FitInfo,
    pub draws: PosteriorDraws,
}

#[derive(Serialize, Deserialize)]
struct Header {
    #[serde(flatten)]
    info: FitInfo,
    meta: DrawsMeta,
    n_draws: usize,
    n_trace: usize,
}

fn corrupt(msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("corrupt archive: {msg}"))
}

impl Archive {
    pub fn to_bytes(&self) -> CliResult<Vec<u8>> {
        let header = Header {
            info: self.info.clone(),
            meta: self.draws.meta.clone(),
            n_draws: self.draws.len(),
            n_trace: self.draws.trace.len(),
        };
        let json = serde_json::to_vec(&header).map_err(|e| CliError::Data(e.to_string()))?;
        let mut out = Vec::with_capacity(json.len() + 64);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(json.len() as u64).to_le_bytes());
        out.extend_from_slice(&json);

        let meta = &self.draws.meta;
        for d in &self.draws.draws {
            put_f64(&mut out, d.sigma2);
            put_f64(&mut out, d.alpha);
            put_u32(&mut out, d.clusters.len() as u32);
            for &l in d.partition.labels() {
                put_u32(&mut out, l as u32);
            }
            for c in &d.clusters {
                put_f64(&mut out, c.mu);
                c.beta.iter().for_each(|&v| put_f64(&mut out, v));
                if meta.has_covariate_params {
                    c.m.iter().for_each(|&v| put_f64(&mut out, v));
                    c.tau.iter().for_each(|&v| put_f64(&mut out, v));
                }
            }
        }
        for t in &self.draws.trace {
            out.extend_from_slice(&(t.iter as u64).to_le_bytes());
            put_f64(&mut out, t.sigma2);
            put_f64(&mut out, t.alpha);
            put_u32(&mut out, t.k as u32);
            put_f64(&mut out, t.loglik);
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> CliResult<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err(CliError::Data("not a dpmreg archive (bad magic bytes)".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(CliError::Data(format!("unsupported archive version {version} (expected {VERSION})")));
        }
        let len = r.u64()? as usize;
        let header: Header = serde_json::from_slice(r.take(len)?).map_err(corrupt)?;
        let meta = header.meta;
        let (n, p) = (meta.n, meta.p);
        if header.info.covariate_names.len() != p {
            return Err(corrupt(format!("{} covariate names for p = {p}", header.info.covariate_names.len())));
        }

        let mut draws = Vec::with_capacity(header.n_draws);
        for _ in 0..header.n_draws {
            let sigma2 = r.f64()?;
            let alpha = r.f64()?;
            let k = r.u32()? as usize;
            let labels = (0..n).map(|_| Ok(r.u32()? as usize)).collect::<CliResult<Vec<_>>>()?;
            let partition = Partition::from_canonical(labels).map_err(corrupt)?;
            if partition.n_clusters() != k {
                return Err(corrupt(format!("draw has {k} clusters but labels use {}", partition.n_clusters())));
            }
            let mut clusters = Vec::with_capacity(k);
            for _ in 0..k {
                let mu = r.f64()?;
                let beta = r.vector(p)?;
                let (m, tau) = if meta.has_covariate_params {
                    (r.vector(p)?, r.vector(p)?)
                } else {
                    (DVector::zeros(0), DVector::zeros(0))
                };
                clusters.push(DrawnCluster { mu, beta, m, tau });
            }
            draws.push(PosteriorDraw { partition, clusters, sigma2, alpha });
        }
        let mut trace = Vec::with_capacity(header.n_trace);
        for _ in 0..header.n_trace {
            trace.push(TraceRow {
                iter: r.u64()? as usize,
                sigma2: r.f64()?,
                alpha: r.f64()?,
                k: r.u32()? as usize,
                loglik: r.f64()?,
            });
        }
        if r.pos != bytes.len() {
            return Err(corrupt(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Archive { info: header.info, draws: PosteriorDraws { draws, meta, trace } })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        crate::io::write_bytes(path, &self.to_bytes()?)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    /// Hyperparameters with the baseline the draws were produced under.
    pub fn hyper(&self) -> Hyperparams {
        Hyperparams { baseline: self.draws.meta.baseline, ..self.info.hyper.clone() }
    }
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> CliResult<&'a [u8]> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.bytes.len()).ok_or_else(|| corrupt("truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> CliResult<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> CliResult<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> CliResult<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn vector(&mut self, p: usize) -> CliResult<DVector<f64>> {
        let v = (0..p).map(|_| self.f64()).collect::<CliResult<Vec<_>>>()?;
        Ok(DVector::from_vec(v))
    }
}
