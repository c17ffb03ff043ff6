use std::fmt;

use num_integer::Integer;

/// A positive definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Form {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i64) -> Form {
        let b = d.rem_euclid(2);
        Form::new(1, b, (b * b - d) / 4)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Reduction of a positive definite form.
    pub fn reduce(&self) -> Form {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b.abs() > a || b == -a {
                // b <- b mod 2a into (-a, a]
                let two_a = 2 * a;
                let mut r = b.rem_euclid(two_a);
                if r > a {
                    r -= two_a;
                }
                c += (r * r - b * b) / (4 * a);
                b = r;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Form::new(a as i64, b as i64, c as i64)
    }

    pub fn inverse(&self) -> Form {
        Form::new(self.a, -self.b, self.c).reduce()
    }

    /// Gaussian composition, followed by reduction.
    pub fn compose(&self, other: &Form) -> Form {
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1, _c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let g = a2.extended_gcd(&a1);
            (g.x, g.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let g = s.extended_gcd(&d);
            (g.x, -g.y, g.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - (b1 * b1 - 4 * a1 * f1.c as i128)) / (4 * a3);
        Form::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    /// An equivalent form whose leading coefficient is coprime to `m`.
    /// The coefficient is the smallest value, properly represented, with
    /// that property.
    pub fn with_leading_coprime_to(&self, m: i64) -> Form {
        let mut best: Option<(i64, Form)> = None;
        let bound = 30;
        for x in -bound..=bound {
            for y in 0..=bound {
                if x.gcd(&y) != 1 {
                    continue;
                }
                let v = self.eval(x, y);
                if v.gcd(&m) != 1 {
                    continue;
                }
                if best.map_or(false, |(bv, _)| bv <= v) {
                    continue;
                }
                // complete (x, y) to a matrix [[x, z], [y, w]] of determinant one
                let g = x.extended_gcd(&y);
                let (w, z) = (g.x * g.gcd, -g.y * g.gcd);
                debug_assert_eq!(x * w - y * z, 1);
                let b = 2 * self.a * x * z + self.b * (x * w + y * z) + 2 * self.c * y * w;
                let c = self.eval(z, w);
                best = Some((v, Form::new(v, b, c)));
            }
        }
        best.expect("form represents no value coprime to the modulus").1
    }
}

/// All reduced primitive forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            let f = Form::new(a, b, c);
            if c >= a && f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers_by_counting() {
        assert_eq!(reduced_forms(-8).len(), 1);
        assert_eq!(reduced_forms(-120).len(), 4);
        assert_eq!(reduced_forms(-15).len(), 2);
        assert_eq!(reduced_forms(-7).len(), 1);
        assert_eq!(reduced_forms(-23).len(), 3);
        assert_eq!(reduced_forms(-56).len(), 4);
    }

    #[test]
    fn composition_with_identity() {
        for d in [-23i64, -56, -120, -71] {
            let e = Form::principal(d);
            for f in reduced_forms(d) {
                assert_eq!(f.compose(&e), f);
                assert_eq!(f.compose(&f.inverse()), e.reduce());
            }
        }
    }

    #[test]
    fn leading_coefficient_coprime() {
        let f = Form::new(3, 0, 10);
        let g = f.with_leading_coprime_to(3 * 7);
        assert_eq!(g.disc(), -120);
        assert_eq!(g.reduce(), f.reduce());
        assert_eq!(g.a.gcd(&21), 1);
    }
}
