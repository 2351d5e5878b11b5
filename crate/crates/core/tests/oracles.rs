//! Independent oracles: slow schoolbook arithmetic and direct set counting,
//! compared with the table-driven library paths.

use boomspec_core::closedform::{main_exponent, region_cardinalities, ClosedForm, S2Membership};
use boomspec_core::spectra::{boomerang_row, ddt_row};
use boomspec_core::{BRegion, Elt, FieldSpec, PermTable};

fn slow_pow(f: &FieldSpec, x: Elt, mut e: u64) -> Elt {
    let (mut acc, mut base) = (Elt::ONE, x);
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul_schoolbook(acc, base);
        }
        base = f.mul_schoolbook(base, base);
        e >>= 1;
    }
    acc
}

/// `beta(1, b)` as the number of `(x, y)` with `F(x) + F(y) = b` and
/// `F(x + 1) + F(y + 1) = b`, from schoolbook powers only.
fn system_oracle(f: &FieldSpec, d: u64) -> Vec<u64> {
    let size = f.size() as u32;
    let table: Vec<u32> = (0..size).map(|x| slow_pow(f, Elt(x), d).0).collect();
    let mut row = vec![0u64; size as usize];
    for x in 0..size {
        for y in 0..size {
            let b = table[x as usize] ^ table[y as usize];
            if table[(x ^ 1) as usize] ^ table[(y ^ 1) as usize] == b {
                row[b as usize] += 1;
            }
        }
    }
    row
}

#[test]
fn boomerang_row_matches_pair_count_oracle() {
    for n in 1..=2 {
        let f = FieldSpec::default_for(4 * n).unwrap();
        let d = main_exponent(n);
        let p = PermTable::power(&f, d).unwrap();
        assert_eq!(
            boomerang_row(&p, Elt::ONE, 2).unwrap(),
            system_oracle(&f, d),
            "n = {n}"
        );
    }
}

#[test]
fn other_moduli_give_the_same_spectrum() {
    // GF(16) under x^4 + x^3 + 1, GF(256) under x^8 + x^4 + x^3 + x^2 + 1
    for (n, m) in [(1, 0x19), (2, 0x11d)] {
        let f = FieldSpec::new(4 * n, m).unwrap().build_tables().unwrap();
        let p = PermTable::power(&f, main_exponent(n)).unwrap();
        let row = boomerang_row(&p, Elt::ONE, 1).unwrap();
        let cf = ClosedForm::new(&f).unwrap();
        for b in f.elements() {
            assert_eq!(
                row[b.0 as usize],
                cf.predicted_beta(b).unwrap(),
                "modulus {m:#x}, b = {b}"
            );
        }
    }
}

#[test]
fn s2_split_tracks_differential_count() {
    for n in 1..=3 {
        let f = FieldSpec::default_for(4 * n).unwrap();
        let p = PermTable::power(&f, main_exponent(n)).unwrap();
        let ddt = ddt_row(&p, Elt::ONE).unwrap();
        let cf = ClosedForm::new(&f).unwrap();
        for b in f.elements() {
            match cf.s2_membership(b).unwrap() {
                S2Membership::S2(_) => assert_eq!(ddt[b.0 as usize], 2),
                S2Membership::S2Prime(_) => assert_eq!(ddt[b.0 as usize], 0),
                S2Membership::Neither => assert!(f.trace(n, b).unwrap().is_zero()),
            }
        }
    }
}

#[test]
fn region_sizes_add_up() {
    for n in 1..=6 {
        let q = 1u64 << n;
        let cards = region_cardinalities(n);
        assert_eq!(cards.values().sum::<u64>(), q.pow(4));
        assert_eq!(cards[&BRegion::S2], cards[&BRegion::S2Prime]);
    }
}

#[test]
fn main_exponent_is_a_permutation_exponent() {
    for n in 1..=6 {
        let d = main_exponent(n);
        let order = (1u64 << (4 * n)) - 1;
        let (mut a, mut b) = (d % order, order);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        assert_eq!(a, 1, "n = {n}");
    }
}
