//! Multiplicative subgroups of GF(2^k)*: the roots of unity `mu_m`, the
//! factorization of GF(q^4)* as `mu_(q-1) * mu_(q+1) * mu_(q^2+1)`, and the
//! `z = c + 1/c` decomposition of subfield elements.

use crate::error::{Error, Result};
use crate::field::{Elt, FieldSpec};

/// Largest subgroup that is stored as an explicit element list.
pub const MATERIALIZE_LIMIT: u64 = 1 << 16;

/// `mu_m = { x : x^m = 1 }` inside the ambient field.
#[derive(Clone, Debug)]
pub struct MuGroup {
    m: u64,
    /// Sorted; `None` when `m` exceeds [`MATERIALIZE_LIMIT`].
    elements: Option<Vec<Elt>>,
}

impl MuGroup {
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn elements(&self) -> Option<&[Elt]> {
        self.elements.as_deref()
    }

    pub fn contains(&self, field: &FieldSpec, x: Elt) -> bool {
        match &self.elements {
            Some(els) => els.binary_search(&x).is_ok(),
            None => !x.is_zero() && field.pow(x, self.m) == Elt::ONE,
        }
    }
}

fn check_group_divisor(field: &FieldSpec, m: u64) -> Result<()> {
    let order = field.group_order();
    if m == 0 || !order.is_multiple_of(m) {
        return Err(Error::NotAGroupDivisor { m, order });
    }
    Ok(())
}

fn generator_of(field: &FieldSpec) -> Result<Elt> {
    field
        .generator()
        .or_else(|| field.find_generator())
        .ok_or_else(|| Error::Consistency("field has no generator".into()))
}

/// Enumerates `mu_m` as the powers `g^((2^k-1)/m * i)`.
pub fn mu_enumerate(field: &FieldSpec, m: u64) -> Result<MuGroup> {
    check_group_divisor(field, m)?;
    if m > MATERIALIZE_LIMIT {
        return Ok(MuGroup { m, elements: None });
    }
    let g = generator_of(field)?;
    let step = field.pow(g, field.group_order() / m);
    let mut elements = Vec::with_capacity(m as usize);
    let mut cur = Elt::ONE;
    for _ in 0..m {
        elements.push(cur);
        cur = field.mul(cur, step);
    }
    elements.sort_unstable();
    Ok(MuGroup {
        m,
        elements: Some(elements),
    })
}

/// `x^m = 1`; zero is in no `mu_m`.
pub fn mu_member(field: &FieldSpec, m: u64, x: Elt) -> Result<bool> {
    check_group_divisor(field, m)?;
    Ok(!x.is_zero() && field.pow(x, m) == Elt::ONE)
}

/// `x = a * u * t` with `a` in `mu_(q-1)`, `u` in `mu_(q+1)`, `t` in `mu_(q^2+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnitFactorization {
    pub a: Elt,
    pub u: Elt,
    pub t: Elt,
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1, "{a} is not invertible modulo {m}");
    old_s.rem_euclid(m as i128) as u64
}

/// CRT idempotent exponents `(e_a, e_u, e_t)` for `q^4 - 1 = (q-1)(q+1)(q^2+1)`:
/// `e_i = 0 mod m_j` for `j != i` and `e_i = 1 mod m_i`.
fn unit_idempotents(q: u64) -> [u64; 3] {
    let factors = [q - 1, q + 1, q * q + 1];
    let total: u64 = factors.iter().product();
    let mut out = [0u64; 3];
    for (slot, &mi) in out.iter_mut().zip(factors.iter()) {
        let cofactor = total / mi;
        let e = (cofactor as u128 * mod_inverse(cofactor % mi, mi) as u128) % total as u128;
        *slot = e as u64;
    }
    out
}

/// Splits `x` in GF(q^4)* (field degree `k = 4n`, `q = 2^n`) into its
/// `mu_(q-1)`, `mu_(q+1)` and `mu_(q^2+1)` components.
pub fn unit_factorize(field: &FieldSpec, x: Elt) -> Result<UnitFactorization> {
    let k = field.degree();
    if !k.is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "unit factorization needs a degree divisible by 4, got {k}"
        )));
    }
    if x.is_zero() {
        return Err(Error::Domain("zero has no unit factorization".into()));
    }
    let q = 1u64 << (k / 4);
    let [ea, eu, et] = unit_idempotents(q);
    let order = field.group_order();
    Ok(match field.log(x) {
        Some(l) => {
            let e = |idem: u64| ((l as u128 * idem as u128) % order as u128) as u64;
            UnitFactorization {
                a: field.exp(e(ea)).expect("tables present"),
                u: field.exp(e(eu)).expect("tables present"),
                t: field.exp(e(et)).expect("tables present"),
            }
        }
        None => UnitFactorization {
            a: field.pow(x, ea),
            u: field.pow(x, eu),
            t: field.pow(x, et),
        },
    })
}

/// Which family the two solutions of `c + 1/c = z` come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChiClass {
    /// Both `c` lie in GF(2^m)*; happens when `Tr_1^m(1/z) = 0`.
    SubfieldPair,
    /// Both `c` lie in `mu_(2^m+1) \ {1}`; happens when `Tr_1^m(1/z) = 1`.
    UnitCirclePair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiDecomposition {
    /// The two roots of `c^2 + z c + 1`, smaller first. They are mutual inverses.
    pub roots: [Elt; 2],
    pub class: ChiClass,
}

/// Solves `w^2 + w = theta` in the ambient field, which must have even
/// degree. Returns `None` when the absolute trace of `theta` is 1.
fn solve_artin_schreier(field: &FieldSpec, theta: Elt) -> Result<Option<Elt>> {
    let k = field.degree();
    if field.trace(1, theta)? != Elt::ZERO {
        return Ok(None);
    }
    let delta = field
        .elements()
        .find(|&d| field.trace(1, d).map(|t| t == Elt::ONE).unwrap_or(false))
        .expect("trace is onto GF(2)");
    // w = sum_{i=1}^{k-1} (sum_{j<i} theta^(2^j)) * delta^(2^i)
    let mut w = Elt::ZERO;
    let mut partial = Elt::ZERO;
    let mut theta_conj = theta;
    let mut delta_conj = delta;
    for _ in 1..k {
        partial = field.add(partial, theta_conj);
        theta_conj = field.square(theta_conj);
        delta_conj = field.square(delta_conj);
        w = field.add(w, field.mul(partial, delta_conj));
    }
    if field.add(field.square(w), w) != theta {
        return Err(Error::Consistency(format!(
            "Artin-Schreier solution failed for {theta}"
        )));
    }
    Ok(Some(w))
}

/// Writes a nonzero `z` of the subfield GF(2^m) as `c + 1/c` with `c` in the
/// ambient field GF(2^(2m)), returning both solutions and their family.
pub fn chi_decompose(ambient: &FieldSpec, m: u32, z: Elt) -> Result<ChiDecomposition> {
    if ambient.degree() != 2 * m {
        return Err(Error::Domain(format!(
            "ambient degree {} is not twice the subfield degree {m}",
            ambient.degree()
        )));
    }
    if z.is_zero() {
        return Err(Error::Domain("z = 0 has no c + 1/c representation".into()));
    }
    if !ambient.in_subfield(m, z)? {
        return Err(Error::Domain(format!("{z} is not in GF(2^{m})")));
    }
    let z_inv = ambient.inv(z)?;
    // c = z w turns c^2 + z c + 1 = 0 into w^2 + w = 1/z^2.
    let w = solve_artin_schreier(ambient, ambient.square(z_inv))?.ok_or_else(|| {
        Error::Consistency(format!("c^2 + {z} c + 1 has no root in GF(2^{})", 2 * m))
    })?;
    let c1 = ambient.mul(z, w);
    let c2 = ambient.add(c1, z);
    let roots = if c1 <= c2 { [c1, c2] } else { [c2, c1] };
    let class = if ambient.relative_trace(1, m, z_inv)? == Elt::ZERO {
        ChiClass::SubfieldPair
    } else {
        ChiClass::UnitCirclePair
    };
    Ok(ChiDecomposition { roots, class })
}
