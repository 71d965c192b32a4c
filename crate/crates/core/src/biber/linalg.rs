//! Small dense symmetric eigensolver and varimax rotation.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

pub const JACOBI_TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Sweeps visit `(p, q)` pairs in row order and stop once the off-diagonal
/// Frobenius norm drops below `tol`. Returns eigenvalues sorted descending
/// (ties keep their original order) and the matching unit eigenvectors as
/// matrix columns.
pub fn symmetric_eigen(a: &Matrix, tol: f64) -> (Vec<f64>, Matrix) {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    let n = a.rows;
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    (values, vectors)
}

/// Flips each column so its largest-magnitude entry is positive.
pub fn fix_signs(m: &mut Matrix) {
    for j in 0..m.cols {
        let mut best = 0;
        for i in 1..m.rows {
            if m[(i, j)].abs() > m[(best, j)].abs() {
                best = i;
            }
        }
        if m.rows > 0 && m[(best, j)] < 0.0 {
            for i in 0..m.rows {
                m[(i, j)] = -m[(i, j)];
            }
        }
    }
}

/// Kaiser-normalized varimax by pairwise planar rotations.
///
/// Returns the orthogonal `k x k` rotation `R` such that `loadings * R` is the
/// rotated solution.
pub fn varimax_rotation(loadings: &Matrix, tol: f64, max_sweeps: usize) -> Matrix {
    let (p, k) = (loadings.rows, loadings.cols);
    let mut x = loadings.clone();
    for i in 0..p {
        let h = (0..k).map(|j| x[(i, j)] * x[(i, j)]).sum::<f64>().sqrt();
        if h > 0.0 {
            for j in 0..k {
                x[(i, j)] /= h;
            }
        }
    }
    let mut rot = Matrix::identity(k);
    if k < 2 || p == 0 {
        return rot;
    }
    let pf = p as f64;
    for _ in 0..max_sweeps {
        let mut max_angle: f64 = 0.0;
        for a in 0..k {
            for b in a + 1..k {
                let (mut su, mut sv, mut suv2, mut suv) = (0.0, 0.0, 0.0, 0.0);
                for i in 0..p {
                    let (xa, xb) = (x[(i, a)], x[(i, b)]);
                    let u = xa * xa - xb * xb;
                    let v = 2.0 * xa * xb;
                    su += u;
                    sv += v;
                    suv2 += u * u - v * v;
                    suv += u * v;
                }
                let num = 2.0 * suv - 2.0 * su * sv / pf;
                let den = suv2 - (su * su - sv * sv) / pf;
                let phi = num.atan2(den) / 4.0;
                if phi.abs() < tol {
                    continue;
                }
                max_angle = max_angle.max(phi.abs());
                let (s, c) = phi.sin_cos();
                for m in [&mut x, &mut rot] {
                    for i in 0..m.rows {
                        let (ma, mb) = (m[(i, a)], m[(i, b)]);
                        m[(i, a)] = c * ma + s * mb;
                        m[(i, b)] = -s * ma + c * mb;
                    }
                }
            }
        }
        if max_angle < tol {
            break;
        }
    }
    rot
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.rows);
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            for j in 0..b.cols {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    out
}
