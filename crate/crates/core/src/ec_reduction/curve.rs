//! Affine group law on `y² = x³ + ax + b` over F_p, p odd.

use rand::Rng;

use super::field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(u64, u64),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

/// A curve with good reduction at `p`; coefficients already reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl ReducedCurve {
    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = field::mul(x, x, p);
        let x3 = field::mul(x2, x, p);
        field::add(field::add(x3, field::mul(self.a, x, p), p), self.b, p)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match *pt {
            Point::Infinity => true,
            Point::Affine(x, y) => x < self.p && y < self.p && field::mul(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match *pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, field::neg(y, self.p)),
        }
    }

    pub fn add(&self, lhs: &Point, rhs: &Point) -> Point {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*lhs, *rhs) {
            (Point::Infinity, q) => return q,
            (q, Point::Infinity) => return q,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if field::add(y1, y2, p) == 0 {
                return Point::Infinity;
            }
            let num = field::add(field::mul(3, field::mul(x1, x1, p), p), self.a, p);
            field::mul(num, field::inv(field::add(y1, y1, p), p), p)
        } else {
            field::mul(field::sub(y2, y1, p), field::inv(field::sub(x2, x1, p), p), p)
        };
        let x3 = field::sub(field::sub(field::mul(lambda, lambda, p), x1, p), x2, p);
        let y3 = field::sub(field::mul(lambda, field::sub(x1, x3, p), p), y1, p);
        Point::Affine(x3, y3)
    }

    pub fn sub(&self, lhs: &Point, rhs: &Point) -> Point {
        self.add(lhs, &self.neg(rhs))
    }

    pub fn mul(&self, pt: &Point, k: u64) -> Point {
        let mut acc = Point::Infinity;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// A random affine point; `None` only if many x-values in a row miss,
    /// which for a group with an affine point means `p` is tiny and unlucky.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Option<Point> {
        let p = self.p;
        for _ in 0..(64 + 8 * p.min(1 << 16)) {
            let x = rng.gen_range(0..p);
            let r = self.rhs(x);
            if let Some(y) = field::sqrt(r, p) {
                let y = if rng.gen::<bool>() { y } else { field::neg(y, p) };
                return Some(Point::Affine(x, y));
            }
        }
        None
    }

    /// Quadratic twist by the least non-residue; its order is `2p + 2 − n`.
    pub fn twist(&self) -> ReducedCurve {
        let p = self.p;
        let mut d = 2;
        while field::legendre(d, p) != -1 {
            d += 1;
        }
        let d2 = field::mul(d, d, p);
        let d3 = field::mul(d2, d, p);
        ReducedCurve { p, a: field::mul(self.a, d2, p), b: field::mul(self.b, d3, p) }
    }

    /// Every point, identity first; intended for small `p` only.
    pub fn all_points(&self) -> Vec<Point> {
        let mut out = vec![Point::Infinity];
        for x in 0..self.p {
            let r = self.rhs(x);
            if let Some(y) = field::sqrt(r, self.p) {
                out.push(Point::Affine(x, y));
                if y != 0 {
                    out.push(Point::Affine(x, self.p - y));
                }
            }
        }
        out
    }
}
