//! Binary and CSV persistence of grid functions.
//!
//! Binary layout, little-endian: `b"GWGF"`, version `u32`, `n: u32`, `N: u32`,
//! `L: f64`, then `N^n` interleaved `(re, im)` `f64` pairs in row-major order.

use std::io::{Read, Write};

use num_complex::Complex;

use super::grid::{GridFunction, GridShape};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAGIC: &[u8; 4] = b"GWGF";
const VERSION: u32 = 1;

pub fn write_binary<T: Real, W: Write>(phi: &GridFunction<T>, mut w: W) -> Result<()> {
    let shape = phi.shape();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(shape.dim() as u32).to_le_bytes())?;
    w.write_all(&(shape.points() as u32).to_le_bytes())?;
    w.write_all(&shape.half_width().to_f64_lossy().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * phi.samples().len());
    for z in phi.samples() {
        buf.extend_from_slice(&z.re.to_f64_lossy().to_le_bytes());
        buf.extend_from_slice(&z.im.to_f64_lossy().to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn read_array<const K: usize, R: Read>(r: &mut R) -> Result<[u8; K]> {
    let mut b = [0u8; K];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_binary<T: Real, R: Read>(mut r: R) -> Result<GridFunction<T>> {
    if &read_array::<4, _>(&mut r)? != MAGIC {
        return Err(Error::Parse("not a GWGF grid file".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported GWGF version {version}")));
    }
    let dim = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let points = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let half_width = f64::from_le_bytes(read_array(&mut r)?);
    let shape = GridShape::new(dim, points, T::lit(half_width))?;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != 16 * shape.len() {
        return Err(Error::Parse(format!(
            "expected {} sample bytes, found {}",
            16 * shape.len(),
            raw.len()
        )));
    }
    let samples = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    GridFunction::new(shape, samples)
}

/// CSV with columns `x,re,im`; one-dimensional grids only.
pub fn write_csv<T: Real, W: Write>(phi: &GridFunction<T>, mut w: W) -> Result<()> {
    if phi.dim() != 1 {
        return Err(Error::InvalidParameter(
            "CSV export is only defined for one-dimensional grids".into(),
        ));
    }
    writeln!(w, "x,re,im")?;
    for (x, z) in phi.shape().coordinates().iter().zip(phi.samples()) {
        writeln!(w, "{:e},{:e},{:e}", x.to_f64_lossy(), z.re.to_f64_lossy(), z.im.to_f64_lossy())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let s = GridShape::new(2, 8, 1.5f64).unwrap();
        let f = GridFunction::from_fn(s, |x| Complex::new(x[0], x[1] * x[0]));
        let mut bytes = Vec::new();
        write_binary(&f, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 24 + 16 * 64);
        let g: GridFunction<f64> = read_binary(bytes.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let s = GridShape::new(1, 8, 1.0f64).unwrap();
        let mut bytes = Vec::new();
        write_binary(&GridFunction::zeros(s), &mut bytes).unwrap();
        bytes.pop();
        assert!(read_binary::<f64, _>(bytes.as_slice()).is_err());
        assert!(read_binary::<f64, _>(&b"XXXX"[..]).is_err());
    }

    #[test]
    fn csv_shape() {
        let s = GridShape::new(1, 8, 1.0f64).unwrap();
        let mut out = Vec::new();
        write_csv(&GridFunction::zeros(s), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("x,re,im\n-1e0,"));
    }
}
