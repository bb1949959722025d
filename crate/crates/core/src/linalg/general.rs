use num_complex::Complex;

use crate::scalar::Real;
use crate::tolerances;

use super::{DenseMatrix, LinalgError};

/// Dense working copy addressed with 1-based indices, matching the textbook
/// statement of the Hessenberg QR algorithm.
struct Work<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Work<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.data[(i - 1) * self.n + (j - 1)]
    }
    #[inline]
    fn put(&mut self, i: usize, j: usize, v: T) {
        self.data[(i - 1) * self.n + (j - 1)] = v;
    }
    #[inline]
    fn swap(&mut self, a: (usize, usize), b: (usize, usize)) {
        let (x, y) = (self.at(a.0, a.1), self.at(b.0, b.1));
        self.put(a.0, a.1, y);
        self.put(b.0, b.1, x);
    }
}

/// Eigenvalues of a general real square matrix, sorted by `(re, im)`.
///
/// Reduction to upper Hessenberg form by stabilized elimination, then
/// Francis double-shift QR with deflation. Complex eigenvalues come out in
/// conjugate pairs.
pub fn general_eigenvalues<T: Real>(m: &DenseMatrix<T>) -> Result<Vec<Complex<T>>, LinalgError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    let mut w = Work {
        n: rows,
        data: m.as_slice().to_vec(),
    };
    to_hessenberg(&mut w);
    let mut values = hessenberg_qr(&mut w)?;
    values.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite eigenvalues")
    });
    Ok(values)
}

fn to_hessenberg<T: Real>(a: &mut Work<T>) {
    let n = a.n;
    for m in 2..n {
        let mut x = T::zero();
        let mut i = m;
        for j in m..=n {
            if a.at(j, m - 1).abs() > x.abs() {
                x = a.at(j, m - 1);
                i = j;
            }
        }
        if i != m {
            for j in m - 1..=n {
                a.swap((i, j), (m, j));
            }
            for j in 1..=n {
                a.swap((j, i), (j, m));
            }
        }
        if x != T::zero() {
            for i in m + 1..=n {
                let mut y = a.at(i, m - 1);
                if y != T::zero() {
                    y /= x;
                    a.put(i, m - 1, y);
                    for j in m..=n {
                        let v = a.at(i, j) - y * a.at(m, j);
                        a.put(i, j, v);
                    }
                    for j in 1..=n {
                        let v = a.at(j, m) + y * a.at(j, i);
                        a.put(j, m, v);
                    }
                }
            }
        }
    }
    // Drop the stored multipliers; only the Hessenberg band is meaningful.
    for i in 3..=n {
        for j in 1..i - 1 {
            a.put(i, j, T::zero());
        }
    }
}

fn hessenberg_qr<T: Real>(a: &mut Work<T>) -> Result<Vec<Complex<T>>, LinalgError> {
    let n = a.n;
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let zero = T::zero();

    let mut anorm = zero;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a.at(i, j).abs();
        }
    }

    let mut total_iterations = 0usize;
    let mut nn = n as isize;
    let mut t = zero;
    let (mut p, mut q, mut r, mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // Look for a negligible subdiagonal element.
            let mut l = nu;
            while l >= 2 {
                let mut s = a.at(l - 1, l - 1).abs() + a.at(l, l).abs();
                if s == zero {
                    s = anorm;
                }
                if a.at(l, l - 1).abs() + s == s {
                    a.put(l, l - 1, zero);
                    break;
                }
                l -= 1;
            }
            x = a.at(nu, nu);
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = zero;
                nn -= 1;
            } else {
                y = a.at(nu - 1, nu - 1);
                w = a.at(nu, nu - 1) * a.at(nu - 1, nu);
                if l == nu - 1 {
                    p = T::of(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= zero {
                        z = p + z.abs().copysign(p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != zero {
                            wr[nu] = x - w / z;
                        }
                        wi[nu - 1] = zero;
                        wi[nu] = zero;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = -z;
                        wi[nu] = z;
                    }
                    nn -= 2;
                } else {
                    if total_iterations >= tolerances::GENERAL_EIGEN_MAX_ITERATIONS {
                        return Err(LinalgError::NoConvergence {
                            iterations: total_iterations,
                        });
                    }
                    if its == 10 || its == 20 {
                        // Exceptional shift.
                        t += x;
                        for i in 1..=nu {
                            let v = a.at(i, i) - x;
                            a.put(i, i, v);
                        }
                        let s = a.at(nu, nu - 1).abs() + a.at(nu - 1, nu - 2).abs();
                        x = T::of(0.75) * s;
                        y = x;
                        w = T::of(-0.4375) * s * s;
                    }
                    its += 1;
                    total_iterations += 1;

                    // Two consecutive small subdiagonal elements.
                    let mut m = nu - 2;
                    loop {
                        z = a.at(m, m);
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a.at(m + 1, m) + a.at(m, m + 1);
                        q = a.at(m + 1, m + 1) - z - rr - ss;
                        r = a.at(m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a.at(m, m - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a.at(m - 1, m - 1).abs() + z.abs() + a.at(m + 1, m + 1).abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nu {
                        a.put(i, i - 2, zero);
                        if i != m + 2 {
                            a.put(i, i - 3, zero);
                        }
                    }
                    // Double QR step on rows l..nn, columns m..nn.
                    for k in m..nu {
                        if k != m {
                            p = a.at(k, k - 1);
                            q = a.at(k + 1, k - 1);
                            r = zero;
                            if k != nu - 1 {
                                r = a.at(k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != zero {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s != zero {
                            if k == m {
                                if l != m {
                                    let v = -a.at(k, k - 1);
                                    a.put(k, k - 1, v);
                                }
                            } else {
                                a.put(k, k - 1, -s * x);
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                p = a.at(k, j) + q * a.at(k + 1, j);
                                if k != nu - 1 {
                                    p += r * a.at(k + 2, j);
                                    let v = a.at(k + 2, j) - p * z;
                                    a.put(k + 2, j, v);
                                }
                                let v = a.at(k + 1, j) - p * y;
                                a.put(k + 1, j, v);
                                let v = a.at(k, j) - p * x;
                                a.put(k, j, v);
                            }
                            let mmin = nu.min(k + 3);
                            for i in l..=mmin {
                                p = x * a.at(i, k) + y * a.at(i, k + 1);
                                if k != nu - 1 {
                                    p += z * a.at(i, k + 2);
                                    let v = a.at(i, k + 2) - p * r;
                                    a.put(i, k + 2, v);
                                }
                                let v = a.at(i, k + 1) - p * q;
                                a.put(i, k + 1, v);
                                let v = a.at(i, k) - p;
                                a.put(i, k, v);
                            }
                        }
                    }
                }
            }
            if !((l as isize) < nn - 1) {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}

/// Greatest distance between paired eigenvalues of two spectra.
///
/// Each eigenvalue of `a`, in sorted order, is paired with the nearest unused
/// eigenvalue of `b`. Spectra of different sizes are infinitely far apart.
pub fn spectrum_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    let mut used = vec![false; b.len()];
    let mut worst = T::zero();
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .fold((usize::MAX, T::infinity()), |best, c| if c.1 < best.1 { c } else { best });
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;

    type M = DenseMatrix<f64>;

    fn reals(v: &[f64]) -> Vec<Complex<f64>> {
        v.iter().map(|&x| Complex::new(x, 0.0)).collect()
    }

    #[test]
    fn triangular_matrix_has_its_diagonal() {
        let m = M::from_rows(&[[1.0, 5.0, -2.0], [0.0, -3.0, 7.0], [0.0, 0.0, 4.0]]).unwrap();
        let e = general_eigenvalues(&m).unwrap();
        assert!(spectrum_distance(&e, &reals(&[-3.0, 1.0, 4.0])) < 1e-12);
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = M::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let e = general_eigenvalues(&m).unwrap();
        let want = [Complex::new(0.0, -1.0), Complex::new(0.0, 1.0)];
        assert!(spectrum_distance(&e, &want) < 1e-12);
    }

    #[test]
    fn companion_matrix_roots() {
        // (x − 1)(x + 2)(x − 3)(x² + 1) = x⁵ − 2x⁴ − 4x³ + 4x² − 5x + 6
        let coeffs = [-2.0, -4.0, 4.0, -5.0, 6.0];
        let n = coeffs.len();
        let m = M::from_fn(n, n, |i, j| {
            if i == 0 {
                -coeffs[j]
            } else if j + 1 == i {
                1.0
            } else {
                0.0
            }
        });
        let e = general_eigenvalues(&m).unwrap();
        let want = [
            Complex::new(-2.0, 0.0),
            Complex::new(0.0, -1.0),
            Complex::new(0.0, 1.0),
            Complex::new(1.0, 0.0),
            Complex::new(3.0, 0.0),
        ];
        assert!(spectrum_distance(&e, &want) < 1e-9);
    }

    #[test]
    fn opposite_real_pair_separates() {
        // Equal-modulus real eigenvalues ±2 stall unshifted QR.
        let m = M::from_rows(&[[0.0, 4.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, 5.0]]).unwrap();
        let e = general_eigenvalues(&m).unwrap();
        assert!(spectrum_distance(&e, &reals(&[-2.0, 2.0, 5.0])) < 1e-10);
    }

    #[test]
    fn agrees_with_jacobi_on_symmetric_input() {
        let m = M::from_rows(&[
            [4.0, 1.0, -2.0, 0.5],
            [1.0, 3.0, 0.0, 1.0],
            [-2.0, 0.0, 1.0, -1.0],
            [0.5, 1.0, -1.0, 2.0],
        ])
        .unwrap();
        let e = general_eigenvalues(&m).unwrap();
        let s = sym_eigen(&m).unwrap();
        assert!(spectrum_distance(&e, &reals(&s.values)) < 1e-10);
    }

    #[test]
    fn trivial_sizes() {
        assert!(general_eigenvalues(&M::zeros(0, 0)).unwrap().is_empty());
        let e = general_eigenvalues(&M::from_diagonal(&[7.0])).unwrap();
        assert_eq!(e, reals(&[7.0]));
        assert!(general_eigenvalues(&M::zeros(2, 3)).is_err());
    }

    #[test]
    fn distance_of_mismatched_sizes_is_infinite() {
        assert!(spectrum_distance(&reals(&[1.0]), &reals(&[1.0, 2.0])).is_infinite());
    }
}
