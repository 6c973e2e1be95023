//! Dense complex Gauss–Jordan elimination for small systems.

use num_complex::Complex64;

pub(crate) struct Reduced {
    pub rows: Vec<Vec<Complex64>>,
    pub pivots: Vec<usize>,
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn null_space(&self, ncols: usize) -> Vec<Vec<Complex64>> {
        let free = (0..ncols).filter(|c| !self.pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Complex64::new(0.0, 0.0); ncols];
            v[f] = Complex64::new(1.0, 0.0);
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = -self.rows[r][f];
            }
            v
        })
        .collect()
    }
}

/// Reduced row echelon form with partial pivoting. Pivots smaller than
/// `rel_tol · max(1, max |a_ij|)` are treated as zero.
pub(crate) fn rref(matrix: &[Vec<Complex64>], ncols: usize, rel_tol: f64) -> Reduced {
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.norm()))
        .fold(1.0_f64, f64::max);
    let threshold = rel_tol * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == a.len() {
            break;
        }
        let (best, mag) = (row..a.len())
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag <= threshold {
            for r in a.iter_mut().skip(row) {
                r[col] = Complex64::new(0.0, 0.0);
            }
            continue;
        }
        a.swap(row, best);
        let inv = a[row][col].inv();
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..a.len() {
            if r != row {
                let factor = a[r][col];
                if factor != Complex64::new(0.0, 0.0) {
                    let pivot_row = a[row].clone();
                    for (x, v) in a[r].iter_mut().zip(&pivot_row).take(ncols) {
                        *x -= factor * v;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Reduced { rows: a, pivots }
}
