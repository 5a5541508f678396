//! Symmetric tridiagonal eigenproblem by implicit QL with Wilkinson shifts.

/// Diagonalizes the tridiagonal matrix with diagonal `diag` and off-diagonal
/// `off` (`off[i]` couples `i` and `i + 1`).
///
/// `rows` selects which rows of the eigenvector matrix are accumulated:
/// on return `vectors[r][k]` is component `rows[r]` of eigenvector `k`.
/// Eigenvalues are returned unsorted, in the same order as the columns.
pub(crate) fn tridiagonal_eigen(diag: &[f64], off: &[f64], rows: &[usize]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            let mut row = vec![0.0; n];
            row[r] = 1.0;
            row
        })
        .collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_chain_spectrum() {
        // open chain of n sites with unit hopping: -2 cos(kπ/(n+1))
        let n = 9;
        let all: Vec<usize> = (0..n).collect();
        let (mut vals, _) = tridiagonal_eigen(&vec![0.0; n], &vec![-1.0; n - 1], &all).unwrap();
        vals.sort_by(f64::total_cmp);
        for (k, v) in vals.iter().enumerate() {
            let expect = -2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvectors_satisfy_the_equation() {
        let d = [2.0, -1.0, 0.5, 3.0, 0.0];
        let o = [0.3, -0.7, 1.1, 0.2];
        let all: Vec<usize> = (0..5).collect();
        let (vals, z) = tridiagonal_eigen(&d, &o, &all).unwrap();
        for k in 0..5 {
            let v: Vec<f64> = (0..5).map(|r| z[r][k]).collect();
            for i in 0..5 {
                let mut tv = d[i] * v[i];
                if i > 0 {
                    tv += o[i - 1] * v[i - 1];
                }
                if i < 4 {
                    tv += o[i] * v[i + 1];
                }
                assert!((tv - vals[k] * v[i]).abs() < 1e-12);
            }
        }
        // a single accumulated row agrees with the full accumulation
        let (vals2, last) = tridiagonal_eigen(&d, &o, &[4]).unwrap();
        assert_eq!(vals, vals2);
        for k in 0..5 {
            assert!((last[0][k] - z[4][k]).abs() < 1e-14);
        }
    }

    #[test]
    fn one_by_one() {
        let (vals, z) = tridiagonal_eigen(&[4.5], &[], &[0]).unwrap();
        assert_eq!(vals, vec![4.5]);
        assert_eq!(z, vec![vec![1.0]]);
    }
}
