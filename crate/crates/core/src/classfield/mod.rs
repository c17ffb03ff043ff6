//! The imaginary quadratic field `K = Q(sqrt(D))`: its class group through
//! reduced binary quadratic forms, the class of the prime above `p`, the
//! quotient `Delta = Cl(K) / <[p]>`, and characters of both.

mod forms;
mod group;

pub use forms::{reduced_forms, Form};
pub use group::{primitive_root, Character, FiniteAbelian, RootOfUnity};

use crate::error::{Error, Result};
use crate::padic::is_prime;

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

fn squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    let mut q = 2u64;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// An imaginary quadratic field with a ramified prime `p`.
#[derive(Clone, Debug)]
pub struct QuadField {
    pub disc: i64,
    pub p: u64,
    /// Reduced forms, principal form first.
    pub forms: Vec<Form>,
    pub class_group: FiniteAbelian,
    /// Index of the class of the prime above `p`.
    pub p_class: usize,
}

/// `Cl(K) / <[p]>` with its coset representatives.
#[derive(Clone, Debug)]
pub struct DeltaGroup {
    pub group: FiniteAbelian,
    /// Class-group index to Delta index.
    pub projection: Vec<usize>,
    /// For each element of Delta, the least class-group index mapping to it.
    pub lifts: Vec<usize>,
    pub p_principal: bool,
}

impl DeltaGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn build_field(d: i64, p: u64) -> Result<QuadField> {
    if d == -3 || d == -4 {
        return Err(Error::UnitObstruction(d));
    }
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if !is_prime(p) || d % p as i64 != 0 {
        return Err(Error::NotRamified { d, p });
    }
    let mut forms = reduced_forms(d);
    let e = Form::principal(d).reduce();
    let pos = forms.iter().position(|f| *f == e).unwrap();
    let id = forms.remove(pos);
    forms.insert(0, id);
    let n = forms.len();
    let index = |f: &Form| forms.iter().position(|g| g == f).expect("composition left the form list");
    let table: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).map(|j| index(&forms[i].compose(&forms[j]))).collect()).collect();
    let class_group = FiniteAbelian::from_table(table);
    let pf = prime_form(d, p).reduce();
    let p_class = index(&pf);
    Ok(QuadField { disc: d, p, forms, class_group, p_class })
}

/// The form `(p, b, c)` attached to the prime above `p`.
pub fn prime_form(d: i64, p: u64) -> Form {
    let p = p as i64;
    let b = (0..2 * p)
        .find(|&b| (b - d).rem_euclid(2) == 0 && (b * b - d).rem_euclid(4 * p) == 0)
        .expect("p ramifies");
    Form::new(p, b, (b * b - d) / (4 * p))
}

impl QuadField {
    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    /// `u` with `O_K = Z[w]`, `w^2 - t w + n = 0`: returns `(t, n)`.
    pub fn omega_poly(&self) -> (i64, i64) {
        if self.disc.rem_euclid(4) == 0 {
            (0, -self.disc / 4)
        } else {
            (1, (1 - self.disc) / 4)
        }
    }

    /// An ideal in the given class with norm coprime to `m`, as the form
    /// `(a, b, c)` so that the ideal is `Z a + Z (-b + sqrt(D)) / 2`.
    pub fn ideal_coprime_to(&self, class: usize, m: i64) -> Form {
        self.forms[class].with_leading_coprime_to(m)
    }

    pub fn class_of(&self, f: &Form) -> usize {
        let r = f.reduce();
        self.forms.iter().position(|g| *g == r).unwrap()
    }
}

pub fn delta_group(f: &QuadField) -> DeltaGroup {
    let sub = f.class_group.span(&[f.p_class]);
    let (group, projection, lifts) = f.class_group.quotient(&sub);
    DeltaGroup { group, projection, lifts, p_principal: f.p_class == 0 }
}

/// Characters of Delta, trivial character first.
pub fn characters(delta: &DeltaGroup) -> Vec<Character> {
    delta.group.characters()
}

/// Characters of the whole class group.
pub fn class_group_characters(f: &QuadField) -> Vec<Character> {
    f.class_group.characters()
}

/// Value at the class of the prime above `p` of a character of the class
/// group.
pub fn theta_bp(f: &QuadField, chi: &Character) -> RootOfUnity {
    chi.value(f.p_class)
}

/// A character of Delta viewed on the class group.
pub fn lift_character(delta: &DeltaGroup, chi: &Character) -> Character {
    chi.pullback(&delta.projection)
}
