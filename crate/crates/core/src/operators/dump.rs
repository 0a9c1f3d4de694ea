//! Debug dump of operator matrices: magic `WHOP`, rows and columns as
//! little-endian u64, α as f64, then row-major (re, im) f64 pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DiscreteOperator;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"WHOP";

pub fn write_whop(op: &DiscreteOperator, path: impl AsRef<Path>) -> Result<()> {
    let m = &op.matrix;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    w.write_all(&op.alpha.to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].re.to_le_bytes())?;
            w.write_all(&m[(i, j)].im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump back as (α, matrix).
pub fn read_whop(path: impl AsRef<Path>) -> Result<(f64, DMatrix<Complex64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config("not a WHOP matrix dump".into()));
    }
    let mut b = [0u8; 8];
    let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
        r.read_exact(&mut b)?;
        Ok(b)
    };
    let rows = u64::from_le_bytes(next(&mut r)?) as usize;
    let cols = u64::from_le_bytes(next(&mut r)?) as usize;
    let alpha = f64::from_le_bytes(next(&mut r)?);
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re = f64::from_le_bytes(next(&mut r)?);
            let im = f64::from_le_bytes(next(&mut r)?);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok((alpha, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::operators::{assemble_dense, Resolution};
    use crate::symbols::Symbol;

    #[test]
    fn round_trip() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let op = assemble_dense(&Symbol::one(1), &l, &o, 10.0, &Resolution::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.whop");
        write_whop(&op, &path).unwrap();
        let (alpha, m) = read_whop(&path).unwrap();
        assert_eq!(alpha, 10.0);
        assert_eq!(m, op.matrix);
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 4 + 24 + 16 * m.len());
    }
}
