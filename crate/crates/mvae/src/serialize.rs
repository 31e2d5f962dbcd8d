//! Model file format.
//!
//! Layout: magic "MVAE", format version u16, metadata block (model kind,
//! view names/dims, latent/hidden dims, normalization stats), then the
//! parameter matrices as little-endian f32 arrays in declared order
//! (per view: w1, b1, w_mu, b_mu, and for variational kinds w_lv, b_lv).
//! In-memory parameters are already f32-rounded, so save/load round
//! trips are bit-exact. Trailing bytes are a format error.

use crate::config::ModelKind;
use crate::error::{Error, Result};
use crate::model::{EncoderParams, TrainedMvae, ViewStats};
use numcore::Matrix;
use std::path::Path;

const MAGIC: &[u8; 4] = b"MVAE";
const VERSION: u16 = 1;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn f32(&mut self, v: f32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u16(s.len() as u16);
        self.buf.extend_from_slice(s.as_bytes());
    }
    fn floats(&mut self, xs: &[f64]) {
        for &x in xs {
            self.f32(x as f32);
        }
    }
    fn matrix(&mut self, m: &Matrix) {
        self.u32(m.rows() as u32);
        self.u32(m.cols() as u32);
        self.floats(m.data());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format(format!(
                "truncated file: needed {} bytes at offset {}, have {}",
                n,
                self.pos,
                self.buf.len() - self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u16()? as usize;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| Error::Format("invalid utf8 name".into()))
    }
    fn floats(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.f32()? as f64);
        }
        Ok(out)
    }
    fn matrix(&mut self) -> Result<Matrix> {
        let rows = self.u32()? as usize;
        let cols = self.u32()? as usize;
        if rows.checked_mul(cols).map_or(true, |n| n > 1 << 28) {
            return Err(Error::Format(format!("implausible matrix shape {rows}x{cols}")));
        }
        let data = self.floats(rows * cols)?;
        Matrix::from_vec(rows, cols, data).map_err(|e| Error::Format(e.to_string()))
    }
    fn done(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after model data",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub fn mvae_to_bytes(model: &TrainedMvae) -> Vec<u8> {
    let mut w = Writer {
        buf: MAGIC.to_vec(),
    };
    w.u16(VERSION);
    w.buf.push(model.kind.code());
    w.u32(model.latent_dim as u32);
    w.u32(model.hidden_dim as u32);
    w.u16(model.views.len() as u16);
    for v in &model.views {
        w.str(&v.name);
        w.u32(v.dim as u32);
    }
    for v in &model.views {
        w.floats(&v.mean);
        w.floats(&v.std);
    }
    let mut params: Vec<&Matrix> = Vec::new();
    for e in &model.encoders {
        params.push(&e.w1);
        params.push(&e.b1);
        params.push(&e.w_mu);
        params.push(&e.b_mu);
        if let (Some(w_lv), Some(b_lv)) = (&e.w_lv, &e.b_lv) {
            params.push(w_lv);
            params.push(b_lv);
        }
    }
    w.u32(params.len() as u32);
    for p in params {
        w.matrix(p);
    }
    w.buf
}

pub fn mvae_from_bytes(bytes: &[u8]) -> Result<TrainedMvae> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Format("bad magic, not an MVAE model file".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported format version {version}, expected {VERSION}"
        )));
    }
    let kind_code = r.take(1)?[0];
    let kind = ModelKind::from_code(kind_code)
        .ok_or_else(|| Error::Format(format!("model kind byte {kind_code} out of range")))?;
    let latent_dim = r.u32()? as usize;
    let hidden_dim = r.u32()? as usize;
    let n_views = r.u16()? as usize;

    let mut names = Vec::with_capacity(n_views);
    for _ in 0..n_views {
        let name = r.str()?;
        let dim = r.u32()? as usize;
        names.push((name, dim));
    }
    let mut views = Vec::with_capacity(n_views);
    for (name, dim) in names {
        let mean = r.floats(dim)?;
        let std = r.floats(dim)?;
        views.push(ViewStats {
            name,
            dim,
            mean,
            std,
        });
    }

    let n_params = r.u32()? as usize;
    let per_view = if kind.is_variational() { 6 } else { 4 };
    if n_params != per_view * n_views {
        return Err(Error::Format(format!(
            "expected {} parameter arrays for {} {} views, found {}",
            per_view * n_views,
            kind.name(),
            n_views,
            n_params
        )));
    }
    let mut encoders = Vec::with_capacity(n_views);
    for v in 0..n_views {
        let w1 = r.matrix()?;
        let b1 = r.matrix()?;
        let w_mu = r.matrix()?;
        let b_mu = r.matrix()?;
        let (w_lv, b_lv) = if kind.is_variational() {
            (Some(r.matrix()?), Some(r.matrix()?))
        } else {
            (None, None)
        };
        let expected = (views[v].dim, hidden_dim);
        if w1.shape() != expected {
            return Err(Error::Format(format!(
                "encoder {v}: w1 shape {:?} does not match view dim {:?}",
                w1.shape(),
                expected
            )));
        }
        encoders.push(EncoderParams {
            w1,
            b1,
            w_mu,
            b_mu,
            w_lv,
            b_lv,
        });
    }
    r.done()?;

    Ok(TrainedMvae {
        kind,
        latent_dim,
        hidden_dim,
        views,
        encoders,
        loss_history: Vec::new(),
    })
}

pub fn save_mvae(model: &TrainedMvae, path: &Path) -> Result<()> {
    std::fs::write(path, mvae_to_bytes(model)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_mvae(path: &Path) -> Result<TrainedMvae> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    mvae_from_bytes(&bytes)
}
