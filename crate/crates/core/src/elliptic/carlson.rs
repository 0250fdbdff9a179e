//! Carlson symmetric integrals RF, RD, RJ, RC by the duplication theorem.
//!
//! All four accept complex arguments. Arguments must lie off the closed
//! negative real axis (at most one may be zero for RF, and x, y for RD/RJ);
//! within that region the principal square root is used at every step, which
//! keeps conjugate-pair inputs on the correct sheet.

use num_complex::Complex64 as C;

const R: f64 = 1e-16;
const MAX_ITER: usize = 200;

fn max_dev(a: C, vals: &[C]) -> f64 {
    vals.iter().map(|v| (a - v).norm()).fold(0.0, f64::max)
}

pub fn rf(x: C, y: C, z: C) -> C {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * R).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let mut a = a0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        if fac * q < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        fac *= 0.25;
    }
    let xx = (a0 - x0) * fac / a;
    let yy = (a0 - y0) * fac / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

pub fn rc(x: C, y: C) -> C {
    let y0 = y;
    let (mut x, mut y) = (x, y);
    let a0 = (x + 2.0 * y) / 3.0;
    let q = (3.0 * R).powf(-1.0 / 8.0) * (a0 - x).norm();
    let mut a = a0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        if fac * q < a.norm() {
            break;
        }
        let lam = 2.0 * x.sqrt() * y.sqrt() + y;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        a = (a + lam) * 0.25;
        fac *= 0.25;
    }
    let s = (y0 - a0) * fac / a;
    let poly = s
        * s
        * (3.0 / 10.0 + s * (1.0 / 7.0 + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * (9.0 / 8.0))))));
    (1.0 + poly) / a.sqrt()
}

pub fn rd(x: C, y: C, z: C) -> C {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (R / 4.0).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let mut a = a0;
    let mut fac = 1.0;
    let mut sum = C::new(0.0, 0.0);
    for _ in 0..MAX_ITER {
        if fac * q < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        sum += fac / (sz * (z + lam));
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        fac *= 0.25;
    }
    let xx = (a0 - x0) * fac / a;
    let yy = (a0 - y0) * fac / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    fac * series / (a * a.sqrt()) + 3.0 * sum
}

pub fn rj(x: C, y: C, z: C, p: C) -> C {
    let (x0, y0, z0) = (x, y, z);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (R / 4.0).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z, p]);
    let mut a = a0;
    let mut fac = 1.0;
    let mut sum = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    for _ in 0..MAX_ITER {
        if fac * q < a.norm() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = delta * (fac * fac * fac) / (d * d);
        sum += fac / d * rc(one, one + e);
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        p = (p + lam) * 0.25;
        a = (a + lam) * 0.25;
        fac *= 0.25;
    }
    let xx = (a0 - x0) * fac / a;
    let yy = (a0 - y0) * fac / a;
    let zz = (a0 - z0) * fac / a;
    let pp = -(xx + yy + zz) / 2.0;
    let xyz = xx * yy * zz;
    let p2 = pp * pp;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * p2;
    let e3 = xyz + 2.0 * e2 * pp + 4.0 * p2 * pp;
    let e4 = (2.0 * xyz + e2 * pp + 3.0 * p2 * pp) * pp;
    let e5 = xyz * p2;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    fac * series / (a * a.sqrt()) + 6.0 * sum
}
