//! Roots of real monic polynomials via companion-matrix Hessenberg QR
//! (Francis double shift, eigenvalues only) followed by a Newton polish.

use super::LinalgError;

/// One root of a real polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexRoot {
    pub re: f64,
    pub im: f64,
}

impl ComplexRoot {
    pub fn is_real(&self, tol: f64) -> bool {
        self.im.abs() <= tol
    }
}

/// All roots of the monic polynomial `z^n + c[0] z^{n-1} + ... + c[n-1]`,
/// sorted by real part then imaginary part.
pub fn monic_roots(trailing: &[f64]) -> Result<Vec<ComplexRoot>, LinalgError> {
    let n = trailing.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // companion matrix, upper Hessenberg
    let mut h = vec![0.0; n * n];
    for (j, &c) in trailing.iter().enumerate() {
        h[j] = -c;
    }
    for i in 1..n {
        h[i * n + (i - 1)] = 1.0;
    }
    let mut roots = hessenberg_qr_eigenvalues(&mut h, n)?;
    for r in &mut roots {
        newton_polish(r, trailing);
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    refine_real_double_roots(&mut roots, trailing);
    Ok(roots)
}

/// QR splits a double root by about sqrt(eps); Newton on the derivative
/// recovers it to full precision. A merged pair is accepted only when P
/// at the refined point is at Horner roundoff level, so genuinely close
/// but distinct roots are left alone.
fn refine_real_double_roots(roots: &mut [ComplexRoot], trailing: &[f64]) {
    let n = roots.len();
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (roots[i], roots[i + 1]);
        if a.im != 0.0 || b.im != 0.0 {
            continue;
        }
        let gap_scale = 1.0_f64.max(a.re.abs()).max(b.re.abs());
        if (b.re - a.re).abs() > 1e-4 * gap_scale {
            continue;
        }
        let mut z = 0.5 * (a.re + b.re);
        for _ in 0..6 {
            let (dp, ddp) = derivative_pair(trailing, z);
            if ddp.abs() < 1e-300 {
                break;
            }
            let step = dp / ddp;
            z -= step;
            if step.abs() <= f64::EPSILON * z.abs().max(1.0) {
                break;
            }
        }
        let (p, _) = eval_with_derivative(trailing, (z, 0.0));
        let mut horner_level = 1.0_f64;
        let mut zp = 1.0;
        for &c in trailing.iter().rev() {
            horner_level += c.abs() * zp;
            zp *= z.abs();
        }
        horner_level += zp;
        if cabs(p) <= 64.0 * (trailing.len() as f64) * f64::EPSILON * horner_level {
            roots[i] = ComplexRoot { re: z, im: 0.0 };
            roots[i + 1] = ComplexRoot { re: z, im: 0.0 };
        }
    }
}

/// (P'(z), P''(z)) for real z.
fn derivative_pair(trailing: &[f64], z: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for &c in trailing {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (dp, ddp)
}

/// Evaluate the monic polynomial and its derivative at a complex point.
fn eval_with_derivative(trailing: &[f64], z: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let mut p = (1.0, 0.0);
    let mut dp = (0.0, 0.0);
    for &c in trailing {
        dp = cadd(cmul(dp, z), p);
        p = cadd(cmul(p, z), (c, 0.0));
    }
    (p, dp)
}

fn newton_polish(r: &mut ComplexRoot, trailing: &[f64]) {
    let mut z = (r.re, r.im);
    let (mut p, _) = eval_with_derivative(trailing, z);
    let mut best = z;
    let mut best_abs = cabs(p);
    for _ in 0..8 {
        let (pv, dv) = eval_with_derivative(trailing, z);
        let dabs = cabs(dv);
        if dabs < 1e-300 {
            break; // multiple root; QR value already as good as it gets
        }
        z = csub(z, cdiv(pv, dv));
        let (pn, _) = eval_with_derivative(trailing, z);
        p = pn;
        if cabs(p) < best_abs {
            best_abs = cabs(p);
            best = z;
        } else {
            break;
        }
    }
    r.re = best.0;
    r.im = best.1;
    // conjugate-pair cleanup: snap tiny imaginary parts of near-real roots
    let scale = trailing.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    if r.im.abs() <= 1e-10 * scale.powf(1.0 / trailing.len() as f64).max(1.0) {
        let (p_real, _) = eval_with_derivative(trailing, (r.re, 0.0));
        if cabs(p_real) <= best_abs.max(1e-12 * scale) {
            r.im = 0.0;
        }
    }
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}
fn csub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}
fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}
fn cabs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

/// Eigenvalues of a real upper Hessenberg matrix by the shifted QR
/// algorithm (EISPACK hqr, eigenvalues only). `h` is row-major `n x n`
/// and is destroyed.
fn hessenberg_qr_eigenvalues(h: &mut [f64], n: usize) -> Result<Vec<ComplexRoot>, LinalgError> {
    let at = |h: &[f64], i: usize, j: usize| h[i * n + j];
    let mut roots = Vec::with_capacity(n);
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += at(h, i, j).abs();
        }
    }
    if anorm == 0.0 {
        for _ in 0..n {
            roots.push(ComplexRoot { re: 0.0, im: 0.0 });
        }
        return Ok(roots);
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 1 {
                let s = at(h, (l - 1) as usize, (l - 1) as usize).abs()
                    + at(h, l as usize, l as usize).abs();
                let s = if s == 0.0 { anorm } else { s };
                if at(h, l as usize, (l - 1) as usize).abs() <= f64::EPSILON * s {
                    h[l as usize * n + (l - 1) as usize] = 0.0;
                    break;
                }
                l -= 1;
            }
            let x = at(h, nn as usize, nn as usize);
            if l == nn {
                roots.push(ComplexRoot { re: x + t, im: 0.0 });
                nn -= 1;
                break;
            }
            let y = at(h, (nn - 1) as usize, (nn - 1) as usize);
            let w = at(h, nn as usize, (nn - 1) as usize) * at(h, (nn - 1) as usize, nn as usize);
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let r1 = x + z;
                    let r2 = if z != 0.0 { x - w / z } else { x + z };
                    roots.push(ComplexRoot { re: r1, im: 0.0 });
                    roots.push(ComplexRoot { re: r2, im: 0.0 });
                } else {
                    roots.push(ComplexRoot { re: x + p, im: z });
                    roots.push(ComplexRoot { re: x + p, im: -z });
                }
                nn -= 2;
                break;
            }
            if its == 30 {
                return Err(LinalgError::NonConvergence { dim: n });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 0..=nn as usize {
                    h[i * n + i] -= x;
                }
                let s = at(h, nn as usize, (nn - 1) as usize).abs()
                    + at(h, (nn - 1) as usize, (nn - 2) as usize).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // double-shift: find two consecutive small subdiagonals
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
            while m >= l {
                let z = at(h, m as usize, m as usize);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / at(h, (m + 1) as usize, m as usize)
                    + at(h, m as usize, (m + 1) as usize);
                q = at(h, (m + 1) as usize, (m + 1) as usize) - z - rr - ss;
                r = at(h, (m + 2) as usize, (m + 1) as usize);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at(h, m as usize, (m - 1) as usize).abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (at(h, (m - 1) as usize, (m - 1) as usize).abs()
                        + at(h, m as usize, m as usize).abs()
                        + at(h, (m + 1) as usize, (m + 1) as usize).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                h[i as usize * n + (i - 2) as usize] = 0.0;
                if i != m + 2 {
                    h[i as usize * n + (i - 3) as usize] = 0.0;
                }
            }
            // double QR step on rows l..=nn
            let mut k = m;
            while k < nn {
                if k != m {
                    p = at(h, k as usize, (k - 1) as usize);
                    q = at(h, (k + 1) as usize, (k - 1) as usize);
                    r = if k != nn - 1 {
                        at(h, (k + 2) as usize, (k - 1) as usize)
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            let idx = k as usize * n + (k - 1) as usize;
                            h[idx] = -h[idx];
                        }
                    } else {
                        h[k as usize * n + (k - 1) as usize] = -s * x;
                    }
                    p += s;
                    let xx = p / s;
                    let yy = q / s;
                    let zz = r / s;
                    q /= p;
                    r /= p;
                    for j in (k as usize)..=(nn as usize) {
                        let mut pp = at(h, k as usize, j) + q * at(h, (k + 1) as usize, j);
                        if k != nn - 1 {
                            pp += r * at(h, (k + 2) as usize, j);
                            h[(k + 2) as usize * n + j] -= pp * zz;
                        }
                        h[(k + 1) as usize * n + j] -= pp * yy;
                        h[k as usize * n + j] -= pp * xx;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in (l as usize)..=(mmin as usize) {
                        let mut pp = xx * at(h, i, k as usize) + yy * at(h, i, (k + 1) as usize);
                        if k != nn - 1 {
                            pp += zz * at(h, i, (k + 2) as usize);
                            let idx = i * n + (k + 2) as usize;
                            h[idx] -= pp * r;
                        }
                        let idx1 = i * n + (k + 1) as usize;
                        h[idx1] -= pp * q;
                        let idx0 = i * n + k as usize;
                        h[idx0] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(roots: &[(f64, f64)]) -> Vec<f64> {
        // product of (z - r_k) -> trailing coefficients, complex accumulation
        let mut coeffs: Vec<(f64, f64)> = vec![(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = cadd(next[i + 1], c);
                next[i] = csub(next[i], cmul(c, r));
            }
            // note: ordering above builds from constant term up; rebuild properly below
            coeffs = next;
        }
        // coeffs[i] multiplies z^i; convert to trailing (z^{n-1}..z^0)
        let n = coeffs.len() - 1;
        let lead = coeffs[n];
        (0..n)
            .rev()
            .map(|i| {
                let c = cdiv(coeffs[i], lead);
                assert!(c.1.abs() < 1e-9);
                c.0
            })
            .collect()
    }

    #[test]
    fn known_quartic_real_roots() {
        // (z-1)(z-2)(z-3)(z-4) = z^4 -10z^3 +35z^2 -50z +24
        let roots = monic_roots(&[-10.0, 35.0, -50.0, 24.0]).unwrap();
        let expect = [1.0, 2.0, 3.0, 4.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r.re - e).abs() < 1e-12, "{r:?} vs {e}");
            assert_eq!(r.im, 0.0);
        }
    }

    #[test]
    fn complex_pair() {
        // (z^2+1)(z-2)(z+3) = z^4 + z^3 -5z^2 + z -6
        let roots = monic_roots(&[1.0, -5.0, 1.0, -6.0]).unwrap();
        let reals: Vec<&ComplexRoot> = roots.iter().filter(|r| r.im == 0.0).collect();
        let imags: Vec<&ComplexRoot> = roots.iter().filter(|r| r.im != 0.0).collect();
        assert_eq!(reals.len(), 2);
        assert_eq!(imags.len(), 2);
        assert!((reals[0].re + 3.0).abs() < 1e-12);
        assert!((reals[1].re - 2.0).abs() < 1e-12);
        assert!((imags[0].im.abs() - 1.0).abs() < 1e-12);
        assert!(imags[0].re.abs() < 1e-12);
    }

    #[test]
    fn double_root_reconstruction() {
        // (z-2)^2 (z-5)(z+1) : double root stresses QR + polish
        let trailing = expand(&[(2.0, 0.0), (2.0, 0.0), (5.0, 0.0), (-1.0, 0.0)]);
        let roots = monic_roots(&trailing).unwrap();
        let back = expand(&roots.iter().map(|r| (r.re, r.im)).collect::<Vec<_>>());
        for (a, b) in back.iter().zip(&trailing) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn random_quartics_reconstruct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let rs: Vec<(f64, f64)> = if rng.gen_bool(0.5) {
                (0..4).map(|_| (rng.gen_range(-10.0..10.0), 0.0)).collect()
            } else {
                let (a, b) = (rng.gen_range(-5.0..5.0), rng.gen_range(0.1..5.0));
                vec![
                    (a, b),
                    (a, -b),
                    (rng.gen_range(-10.0..10.0), 0.0),
                    (rng.gen_range(-10.0..10.0), 0.0),
                ]
            };
            let trailing = expand(&rs);
            let roots = monic_roots(&trailing).unwrap();
            let back = expand(&roots.iter().map(|r| (r.re, r.im)).collect::<Vec<_>>());
            let scale = trailing.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
            for (a, b) in back.iter().zip(&trailing) {
                assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b} (scale {scale})");
            }
        }
    }
}
