//! Closed-form boomerang and differential spectrum of `F(X) = X^(q^3+q^2+q-1)`
//! over GF(q^4), `q = 2^n`.
//!
//! Every `b` in GF(q^4) falls in exactly one [`BRegion`]; each predictor
//! below is a function of the region alone. Region tests run in a fixed
//! order (see [`ClosedForm::region_of`]).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elt, FieldSpec};
use crate::structure::{mu_enumerate, MuGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BRegion {
    /// `b = 0`
    Zero,
    /// `b = 1`
    One,
    /// GF(q) \ GF(2)
    SubfieldQ,
    /// `mu_(q+1) \ {1}`
    MuStar,
    /// GF(q^2) \ (GF(q) u mu_(q+1))
    Q2Other,
    S2,
    S2Prime,
    /// Relative trace to GF(q) vanishes, outside GF(q^2), nonzero.
    TraceZeroOutside,
}

impl BRegion {
    pub const ALL: [BRegion; 8] = [
        BRegion::Zero,
        BRegion::One,
        BRegion::SubfieldQ,
        BRegion::MuStar,
        BRegion::Q2Other,
        BRegion::S2,
        BRegion::S2Prime,
        BRegion::TraceZeroOutside,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BRegion::Zero => "ZERO",
            BRegion::One => "ONE",
            BRegion::SubfieldQ => "SUBFIELD_Q",
            BRegion::MuStar => "MU_STAR",
            BRegion::Q2Other => "Q2_OTHER",
            BRegion::S2 => "S2",
            BRegion::S2Prime => "S2_PRIME",
            BRegion::TraceZeroOutside => "TRACE_ZERO_OUTSIDE",
        }
    }

    pub fn from_tag(tag: &str) -> Option<BRegion> {
        BRegion::ALL.into_iter().find(|r| r.tag() == tag)
    }

    /// Whether the region lies inside the GF(q^2) subfield.
    pub fn in_q2(self) -> bool {
        matches!(
            self,
            BRegion::Zero | BRegion::One | BRegion::SubfieldQ | BRegion::MuStar | BRegion::Q2Other
        )
    }

    /// `beta_F(1, b)`; `q^4` at `b = 0`.
    pub fn beta(self, q: u64) -> u64 {
        match self {
            BRegion::Zero => q.pow(4),
            BRegion::One => q * q,
            BRegion::SubfieldQ => 2 * q * q,
            BRegion::MuStar => 3 * q * (q - 1),
            BRegion::Q2Other => 2 * q * q - 3 * q,
            BRegion::S2 => 2,
            BRegion::S2Prime => 0,
            BRegion::TraceZeroOutside => q * q - 2 * q,
        }
    }

    /// `#{x : F(x) + F(x + 1) = b}`.
    pub fn diff_count(self, q: u64) -> u64 {
        match self {
            BRegion::One => q * q,
            BRegion::MuStar => q * q - q,
            BRegion::S2 => 2,
            _ => 0,
        }
    }

    /// `sum over c in mu_(q+1) \ {1} of beta_tilde(1, b, c)`.
    pub fn mu_sum(self, q: u64) -> u64 {
        match self {
            BRegion::Zero => (q - 1) * q * q,
            BRegion::One => 0,
            BRegion::SubfieldQ => q * q,
            BRegion::MuStar => 2 * q * q - 3 * q,
            BRegion::Q2Other => q * q - 3 * q,
            BRegion::S2 | BRegion::S2Prime => 0,
            BRegion::TraceZeroOutside => q * (q - 2),
        }
    }

    /// `sum over c in S2 of beta_tilde(1, b, c)`.
    pub fn s2_sum(self, q: u64) -> u64 {
        match self {
            BRegion::Zero => q.pow(4) - q.pow(3),
            BRegion::S2 => 2,
            _ => 0,
        }
    }

    /// `beta_tilde(1, b, 1)`.
    pub fn c1_term(self, q: u64) -> u64 {
        if self.in_q2() {
            q * q
        } else {
            0
        }
    }

    /// Number of `b` in GF(q^4) that fall in this region.
    pub fn cardinality(self, q: u64) -> u64 {
        match self {
            BRegion::Zero | BRegion::One => 1,
            BRegion::SubfieldQ => q - 2,
            BRegion::MuStar => q,
            BRegion::Q2Other => q * q - 2 * q,
            BRegion::S2 | BRegion::S2Prime => (q.pow(4) - q.pow(3)) / 2,
            BRegion::TraceZeroOutside => q.pow(3) - q * q,
        }
    }
}

impl fmt::Display for BRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Expected size of each region for `q = 2^n`; the values sum to `q^4`.
pub fn region_cardinalities(n: u32) -> BTreeMap<BRegion, u64> {
    let q = 1u64 << n;
    BRegion::ALL
        .iter()
        .map(|&r| (r, r.cardinality(q)))
        .collect()
}

/// `q^3 + q^2 + q - 1` for `q = 2^n`.
pub fn main_exponent(n: u32) -> u64 {
    let q = 1u64 << n;
    q * q * q + q * q + q - 1
}

/// Intermediate values of the S2 / S2' test for one `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S2Witness {
    /// `Nr(b^(q+1) + 1) / [(b + b^(q^2)) Tr(b)]^2`
    pub a: Elt,
    /// `(b^(q+1) + 1)^(q^2+1) / (b + b^(q^2))^(q+1)`
    pub u: Elt,
    /// `Tr_1^n(A)`
    pub trace_a: Elt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S2Membership {
    /// `Tr_n^4n(b) = 0`.
    Neither,
    S2(S2Witness),
    S2Prime(S2Witness),
}

impl S2Membership {
    pub fn witness(&self) -> Option<S2Witness> {
        match *self {
            S2Membership::Neither => None,
            S2Membership::S2(w) | S2Membership::S2Prime(w) => Some(w),
        }
    }
}

/// Region of one element together with everything predicted for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub b: String,
    pub region: BRegion,
    pub predicted_beta: u64,
    pub predicted_diff_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_trace_a: Option<String>,
}

/// Predictors over a fixed model of GF(q^4).
#[derive(Clone, Debug)]
pub struct ClosedForm {
    n: u32,
    q: u64,
    field: FieldSpec,
    unit_circle: MuGroup,
}

impl ClosedForm {
    /// `field` must have degree `4n` with `n >= 1`.
    pub fn new(field: &FieldSpec) -> Result<Self> {
        let k = field.degree();
        if !k.is_multiple_of(4) {
            return Err(Error::Domain(format!(
                "the closed form needs a field of degree 4n, got {k}"
            )));
        }
        let n = k / 4;
        let q = 1u64 << n;
        Ok(ClosedForm {
            n,
            q,
            field: field.clone(),
            unit_circle: mu_enumerate(field, q + 1)?,
        })
    }

    /// GF(2^(4n)) over the default modulus.
    pub fn for_n(n: u32) -> Result<Self> {
        if n == 0 || 4 * n > crate::field::MAX_DEGREE {
            return Err(Error::Domain(format!("n = {n} is outside 1..=6")));
        }
        ClosedForm::new(&FieldSpec::default_for(4 * n)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        main_exponent(self.n)
    }

    /// `mu_(q+1) \ {1}`, sorted.
    pub fn unit_circle_star(&self) -> Vec<Elt> {
        self.unit_circle
            .elements()
            .expect("mu_(q+1) is materialized")
            .iter()
            .copied()
            .filter(|&c| c != Elt::ONE)
            .collect()
    }

    fn check(&self, b: Elt) -> Result<()> {
        if self.field.contains(b) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{b} is not in GF(2^{})",
                self.field.degree()
            )))
        }
    }

    /// Splits `{b : Tr_n^4n(b) != 0}` into S2 and S2'.
    ///
    /// `A` and `U` live in GF(q^2) and satisfy `A + A^q = U + U^2`, so
    /// `Tr_1^n(A)` (the formal sum of the first `n` conjugates) is either `U`
    /// or `U + 1`. Anything else is reported as a consistency error.
    pub fn s2_membership(&self, b: Elt) -> Result<S2Membership> {
        self.check(b)?;
        let f = &self.field;
        let n = self.n;
        let tr = f.trace(n, b)?;
        if tr.is_zero() {
            return Ok(S2Membership::Neither);
        }
        let s = f.add(f.pow(b, self.q + 1), Elt::ONE);
        let d = f.add(b, f.frobenius(b, 2 * n));
        if d.is_zero() {
            return Err(Error::Consistency(format!(
                "b + b^(q^2) vanishes for {b} although its trace is nonzero"
            )));
        }
        let a = f.div(f.norm(n, s)?, f.square(f.mul(d, tr)))?;
        let u = f.div(f.pow(s, self.q * self.q + 1), f.pow(d, self.q + 1))?;
        let witness = S2Witness {
            a,
            u,
            trace_a: f.relative_trace(1, n, a)?,
        };
        if !self.witness_identity_holds(&witness) {
            return Err(Error::Consistency(format!(
                "A + A^q != U + U^2 for b = {b} (A = {a}, U = {u})"
            )));
        }
        if witness.trace_a == u {
            Ok(S2Membership::S2(witness))
        } else if witness.trace_a == f.add(u, Elt::ONE) {
            Ok(S2Membership::S2Prime(witness))
        } else {
            Err(Error::Consistency(format!(
                "Tr(A) = {} differs from both U and U + 1 for b = {b}",
                witness.trace_a
            )))
        }
    }

    /// `A + A^q = U + U^2`.
    pub fn witness_identity_holds(&self, w: &S2Witness) -> bool {
        let f = &self.field;
        f.add(w.a, f.frobenius(w.a, self.n)) == f.add(w.u, f.square(w.u))
    }

    /// Tests in order: ZERO, ONE, MU_STAR, SUBFIELD_Q, Q2_OTHER, then the
    /// S2 / S2' split, else TRACE_ZERO_OUTSIDE.
    pub fn region_of(&self, b: Elt) -> Result<BRegion> {
        self.check(b)?;
        let f = &self.field;
        if b.is_zero() {
            return Ok(BRegion::Zero);
        }
        if b == Elt::ONE {
            return Ok(BRegion::One);
        }
        if self.unit_circle.contains(f, b) {
            return Ok(BRegion::MuStar);
        }
        if f.in_subfield(self.n, b)? {
            return Ok(BRegion::SubfieldQ);
        }
        if f.in_subfield(2 * self.n, b)? {
            return Ok(BRegion::Q2Other);
        }
        Ok(match self.s2_membership(b)? {
            S2Membership::S2(_) => BRegion::S2,
            S2Membership::S2Prime(_) => BRegion::S2Prime,
            S2Membership::Neither => BRegion::TraceZeroOutside,
        })
    }

    pub fn predicted_beta(&self, b: Elt) -> Result<u64> {
        Ok(self.region_of(b)?.beta(self.q))
    }

    pub fn predicted_diff_count(&self, b: Elt) -> Result<u64> {
        Ok(self.region_of(b)?.diff_count(self.q))
    }

    pub fn predicted_mu_sum(&self, b: Elt) -> Result<u64> {
        Ok(self.region_of(b)?.mu_sum(self.q))
    }

    pub fn predicted_s2_sum(&self, b: Elt) -> Result<u64> {
        Ok(self.region_of(b)?.s2_sum(self.q))
    }

    pub fn predicted_c1_term(&self, b: Elt) -> Result<u64> {
        self.check(b)?;
        Ok(if self.field.in_subfield(2 * self.n, b)? {
            self.q * self.q
        } else {
            0
        })
    }

    pub fn classify(&self, b: Elt) -> Result<Classification> {
        let region = self.region_of(b)?;
        let w = if b.is_zero() {
            None
        } else {
            self.s2_membership(b)?.witness()
        };
        let f = &self.field;
        Ok(Classification {
            b: f.fmt_elt(b),
            region,
            predicted_beta: region.beta(self.q),
            predicted_diff_count: region.diff_count(self.q),
            witness_a: w.map(|w| f.fmt_elt(w.a)),
            witness_u: w.map(|w| f.fmt_elt(w.u)),
            witness_trace_a: w.map(|w| f.fmt_elt(w.trace_a)),
        })
    }

    /// Region of every element, indexed by bit value.
    pub fn classify_all(&self) -> Result<Vec<BRegion>> {
        self.field.elements().map(|b| self.region_of(b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(cf: &ClosedForm) -> BTreeMap<BRegion, u64> {
        let mut out: BTreeMap<BRegion, u64> = BRegion::ALL.iter().map(|&r| (r, 0)).collect();
        for r in cf.classify_all().unwrap() {
            *out.get_mut(&r).unwrap() += 1;
        }
        out
    }

    #[test]
    fn tags_round_trip() {
        for r in BRegion::ALL {
            assert_eq!(BRegion::from_tag(r.tag()), Some(r));
            let json = serde_json::to_string(&r).unwrap();
            assert_eq!(json, format!("\"{}\"", r.tag()));
        }
        assert_eq!(BRegion::from_tag("nope"), None);
    }

    #[test]
    fn cardinalities_closed_form() {
        let c1: Vec<u64> = region_cardinalities(1).into_values().collect();
        assert_eq!(c1, vec![1, 1, 0, 2, 0, 4, 4, 4]);
        let c2: Vec<u64> = region_cardinalities(2).into_values().collect();
        assert_eq!(c2, vec![1, 1, 2, 4, 8, 96, 96, 48]);
        for n in 1..=6 {
            let q = 1u64 << n;
            assert_eq!(region_cardinalities(n).values().sum::<u64>(), q.pow(4));
        }
    }

    #[test]
    fn classification_counts_match_cardinalities() {
        for n in 1..=3 {
            let cf = ClosedForm::for_n(n).unwrap();
            assert_eq!(counts(&cf), region_cardinalities(n), "n = {n}");
        }
    }

    #[test]
    fn subfield_elements_are_never_s2() {
        let cf = ClosedForm::for_n(2).unwrap();
        let f = cf.field().clone();
        for b in f.elements().filter(|&b| f.in_subfield(4, b).unwrap()) {
            assert_eq!(cf.s2_membership(b).unwrap(), S2Membership::Neither);
        }
    }

    #[test]
    fn trivial_regions() {
        let cf = ClosedForm::for_n(2).unwrap();
        assert_eq!(cf.region_of(Elt::ZERO).unwrap(), BRegion::Zero);
        assert_eq!(cf.region_of(Elt::ONE).unwrap(), BRegion::One);
        assert_eq!(cf.predicted_beta(Elt::ZERO).unwrap(), 256);
        assert!(cf.region_of(Elt(256)).is_err());
        assert!(ClosedForm::new(&FieldSpec::default_for(6).unwrap()).is_err());
    }

    #[test]
    fn predictions_n2() {
        let cf = ClosedForm::for_n(2).unwrap();
        let f = cf.field().clone();
        for c in cf.unit_circle_star() {
            assert_eq!(cf.region_of(c).unwrap(), BRegion::MuStar);
            assert_eq!(cf.predicted_beta(c).unwrap(), 36);
            assert_eq!(cf.predicted_mu_sum(c).unwrap(), 20);
        }
        let gf4: Vec<Elt> = f
            .elements()
            .filter(|&b| b.0 > 1 && f.in_subfield(2, b).unwrap())
            .collect();
        assert_eq!(gf4.len(), 2);
        for b in gf4 {
            assert_eq!(cf.predicted_beta(b).unwrap(), 32);
        }
        assert_eq!(cf.predicted_mu_sum(Elt::ZERO).unwrap(), 48);
        assert_eq!(cf.predicted_s2_sum(Elt::ZERO).unwrap(), 192);
        assert_eq!(cf.predicted_c1_term(Elt::ZERO).unwrap(), 16);
        assert_eq!(cf.predicted_c1_term(Elt::ONE).unwrap(), 16);
        for b in f.elements() {
            let r = cf.region_of(b).unwrap();
            let total = cf.predicted_c1_term(b).unwrap()
                + cf.predicted_s2_sum(b).unwrap()
                + cf.predicted_mu_sum(b).unwrap();
            assert_eq!(total, cf.predicted_beta(b).unwrap(), "{r}");
            match r {
                BRegion::S2Prime => assert_eq!(cf.predicted_beta(b).unwrap(), 0),
                BRegion::S2 => assert_eq!(cf.predicted_s2_sum(b).unwrap(), 2),
                BRegion::MuStar => assert_eq!(cf.predicted_s2_sum(b).unwrap(), 0),
                _ => {}
            }
            if !f.in_subfield(4, b).unwrap() {
                assert_eq!(cf.predicted_c1_term(b).unwrap(), 0);
            }
            if !f.trace(2, b).unwrap().is_zero() {
                assert_eq!(cf.predicted_mu_sum(b).unwrap(), 0);
            }
        }
    }

    #[test]
    fn differential_predictions() {
        let cf = ClosedForm::for_n(1).unwrap();
        assert_eq!(cf.predicted_diff_count(Elt::ONE).unwrap(), 4);
        for c in cf.unit_circle_star() {
            assert_eq!(cf.predicted_diff_count(c).unwrap(), 2);
        }
        let f = cf.field().clone();
        for b in f.elements() {
            if cf.region_of(b).unwrap() == BRegion::S2Prime {
                assert_eq!(cf.predicted_diff_count(b).unwrap(), 0);
            }
        }
    }

    #[test]
    fn witnesses_satisfy_the_quadratic_identity() {
        let cf = ClosedForm::for_n(2).unwrap();
        let f = cf.field().clone();
        for b in f.elements() {
            if let Some(w) = cf.s2_membership(b).unwrap().witness() {
                assert!(cf.witness_identity_holds(&w));
                // A and U lie in GF(q^2), not in GF(q)
                assert!(f.in_subfield(4, w.a).unwrap());
                assert!(f.in_subfield(4, w.u).unwrap());
            }
        }
    }
}
