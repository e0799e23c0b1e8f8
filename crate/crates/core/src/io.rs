//! Plain-text and binary dumps of fields, trajectories and Brownian paths.
//!
//! Spectral fields are written as a header carrying `K` followed by the
//! `(re, im)` pairs for `k = -K..=K`; grid fields as a header carrying `M`
//! followed by the values in ascending `x`. Floats are printed with Rust's
//! shortest round-trip formatting, so text dumps are exact and byte-stable.

use std::io::{self, BufRead, Read, Write};

use num_complex::Complex;

use crate::integrator::Trajectory;
use crate::noise::BrownianPath;
use crate::spectral::{GridField, SpectralField};

const SPECTRAL_MAGIC: &[u8; 4] = b"VVSF";
const GRID_MAGIC: &[u8; 4] = b"VVGF";

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn full_coefficients(field: &SpectralField<f64>) -> Vec<Complex<f64>> {
    let k = field.max_mode() as i64;
    (-k..=k).map(|i| field.coeff(i)).collect()
}

fn from_full(k: usize, pairs: &[Complex<f64>]) -> io::Result<SpectralField<f64>> {
    if pairs.len() != 2 * k + 1 {
        return Err(invalid(format!("expected {} coefficients, found {}", 2 * k + 1, pairs.len())));
    }
    SpectralField::from_coeffs(pairs[k..].to_vec()).map_err(|e| invalid(e.to_string()))
}

pub fn write_spectral_csv<W: Write>(mut w: W, field: &SpectralField<f64>) -> io::Result<()> {
    writeln!(w, "K,{}", field.max_mode())?;
    for c in full_coefficients(field) {
        writeln!(w, "{},{}", c.re, c.im)?;
    }
    Ok(())
}

pub fn read_spectral_csv<R: BufRead>(r: R) -> io::Result<SpectralField<f64>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| invalid("empty field file"))??;
    let k: usize = header
        .strip_prefix("K,")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| invalid(format!("bad spectral header {header:?}")))?;
    let mut pairs = Vec::with_capacity(2 * k + 1);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| invalid(format!("bad coefficient row {line:?}")))?;
        let re = a.trim().parse().map_err(|_| invalid(format!("bad number {a:?}")))?;
        let im = b.trim().parse().map_err(|_| invalid(format!("bad number {b:?}")))?;
        pairs.push(Complex::new(re, im));
    }
    from_full(k, &pairs)
}

pub fn write_grid_csv<W: Write>(mut w: W, field: &GridField<f64>) -> io::Result<()> {
    writeln!(w, "M,{}", field.len())?;
    for v in field.values() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

pub fn read_grid_csv<R: BufRead>(r: R) -> io::Result<GridField<f64>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| invalid("empty field file"))??;
    let m: usize = header
        .strip_prefix("M,")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| invalid(format!("bad grid header {header:?}")))?;
    let mut values = Vec::with_capacity(m);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        values.push(line.trim().parse().map_err(|_| invalid(format!("bad number {line:?}")))?);
    }
    if values.len() != m {
        return Err(invalid(format!("expected {m} grid values, found {}", values.len())));
    }
    Ok(GridField::new(values))
}

pub fn write_spectral_binary<W: Write>(mut w: W, field: &SpectralField<f64>) -> io::Result<()> {
    w.write_all(SPECTRAL_MAGIC)?;
    w.write_all(&(field.max_mode() as u64).to_le_bytes())?;
    for c in full_coefficients(field) {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_header<R: Read>(r: &mut R, magic: &[u8; 4]) -> io::Result<usize> {
    let mut tag = [0u8; 4];
    r.read_exact(&mut tag)?;
    if &tag != magic {
        return Err(invalid("unrecognised binary field header"));
    }
    let mut n = [0u8; 8];
    r.read_exact(&mut n)?;
    usize::try_from(u64::from_le_bytes(n)).map_err(|_| invalid("length overflows usize"))
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_spectral_binary<R: Read>(mut r: R) -> io::Result<SpectralField<f64>> {
    let k = read_header(&mut r, SPECTRAL_MAGIC)?;
    let mut pairs = Vec::with_capacity(2 * k + 1);
    for _ in 0..2 * k + 1 {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        pairs.push(Complex::new(re, im));
    }
    from_full(k, &pairs)
}

pub fn write_grid_binary<W: Write>(mut w: W, field: &GridField<f64>) -> io::Result<()> {
    w.write_all(GRID_MAGIC)?;
    w.write_all(&(field.len() as u64).to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_grid_binary<R: Read>(mut r: R) -> io::Result<GridField<f64>> {
    let m = read_header(&mut r, GRID_MAGIC)?;
    let values = (0..m).map(|_| read_f64(&mut r)).collect::<io::Result<Vec<_>>>()?;
    Ok(GridField::new(values))
}

pub const TRAJECTORY_HEADER: &str = "t,norm_r,norm_s,energy,dissipation,mean_difference,w";

/// One row per recorded step.
pub fn write_trajectory_csv<W: Write>(w: W, traj: &Trajectory<f64>) -> io::Result<()> {
    write_trajectory_csv_sampled(w, traj, 1)
}

/// Rows at every `every`-th step, plus the final step.
pub fn write_trajectory_csv_sampled<W: Write>(mut w: W, traj: &Trajectory<f64>, every: usize) -> io::Result<()> {
    let every = every.max(1);
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    let last = traj.len().saturating_sub(1);
    for j in (0..traj.len()).filter(|&j| j % every == 0 || j == last) {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            traj.times[j],
            traj.norm_r[j],
            traj.norm_s[j],
            traj.energy[j],
            traj.dissipation[j],
            traj.mean_difference[j],
            traj.brownian[j]
        )?;
    }
    Ok(())
}

/// `(t, W(t))` at the given dyadic depth.
pub fn write_path_csv<W: Write>(mut w: W, path: &BrownianPath, depth: u32) -> io::Result<()> {
    let view = path.subsample(depth).map_err(|e| invalid(e.to_string()))?;
    writeln!(w, "t,w")?;
    for (t, v) in view.times().zip(view.values()) {
        writeln!(w, "{t},{v}")?;
    }
    Ok(())
}
