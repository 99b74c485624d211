//! Grid data from CSV rows `(coords..., re, im)`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::repgrid::C64;

/// Values on `lattice` from a CSV file. Unlisted nodes are zero; a non-numeric first row is
/// taken as a header.
pub fn read_grid_csv(path: &Path, lattice: &Lattice) -> Result<Vec<C64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let d = lattice.axes().len();
    let mut values = vec![C64::new(0.0, 0.0); lattice.len()];
    let mut seen = vec![false; lattice.len()];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(row + 1, |p| p.line() as usize);
        let fields: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let fields = match fields {
            Ok(f) => f,
            Err(_) if row == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("{}:{line}: {e}", path.display()))),
        };
        if fields.len() != d + 2 {
            return Err(Error::Parse(format!(
                "{}:{line}: expected {} columns (coords..., re, im), got {}",
                path.display(),
                d + 2,
                fields.len()
            )));
        }
        let node = node_of(lattice, &fields[..d]).ok_or_else(|| {
            Error::Parse(format!(
                "{}:{line}: coordinates are not a grid node",
                path.display()
            ))
        })?;
        if std::mem::replace(&mut seen[node], true) {
            return Err(Error::Parse(format!(
                "{}:{line}: node listed twice",
                path.display()
            )));
        }
        values[node] = C64::new(fields[d], fields[d + 1]);
    }
    Ok(values)
}

fn node_of(lattice: &Lattice, t: &[f64]) -> Option<usize> {
    let m: Option<Vec<i64>> = lattice
        .axes()
        .iter()
        .zip(t)
        .map(|(a, &c)| {
            let k = ((c - a.coord(0)) / a.step).round();
            let ok =
                k >= 0.0 && (k as usize) < a.n && (a.coord(k as usize) - c).abs() <= 1e-6 * a.step;
            ok.then_some(k as i64)
        })
        .collect();
    Some(lattice.ravel_wrapped(&m?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Axis;
    use std::io::Write;

    #[test]
    fn rows_land_on_nodes() {
        let l = Lattice::new(vec![
            Axis::centered(4, 2.0, 0.0),
            Axis::centered(2, 1.0, 0.0),
        ]);
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "t1,t2,re,im\n-1,0,1.5,-2\n# note\n1.0,-1,0,1").unwrap();
        let v = read_grid_csv(f.path(), &l).unwrap();
        assert_eq!(v[1 * 2 + 1], C64::new(1.5, -2.0));
        assert_eq!(v[3 * 2], C64::new(0.0, 1.0));
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 2);
        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "0.3,0,1,0").unwrap();
        assert!(read_grid_csv(bad.path(), &l).is_err());
    }
}
