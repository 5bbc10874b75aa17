//! Exact rational linear algebra: determinants and nullspace computation.

use rug::Rational;

/// Determinant by exact Gaussian elimination with nonzero pivoting.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::from(1);
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col].cmp0() != std::cmp::Ordering::Equal);
        let Some(p) = pivot else {
            return Rational::from(0);
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if a[r][col].cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let factor = Rational::from(&a[r][col] / &pv);
            for c in col..n {
                let t = Rational::from(&factor * &a[col][c]);
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Basis of the right nullspace of an m x n rational matrix, via reduced row
/// echelon form. Each basis vector has length n.
pub fn nullspace(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return vec![];
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| a[i][c].cmp0() != std::cmp::Ordering::Equal);
        let Some(p) = pivot else { continue };
        a.swap(p, r);
        let pv = a[r][c].clone();
        for j in c..cols {
            a[r][j] /= &pv;
        }
        for i in 0..rows {
            if i != r && a[i][c].cmp0() != std::cmp::Ordering::Equal {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = Rational::from(&f * &a[r][j]);
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![Rational::from(0); cols];
        v[fc] = Rational::from(1);
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -Rational::from(&a[ri][fc]);
        }
        basis.push(v);
    }
    basis
}
