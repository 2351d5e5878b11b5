use boomspec_core::spectra::{
    bct_entry, bct_entry_pairs_naive, bct_entry_system, boomerang_row, ddt_row, parse_table,
};
use boomspec_core::structure::{chi_decompose, unit_factorize};
use boomspec_core::{Elt, FieldSpec, PermTable};
use proptest::prelude::*;

fn field(k: u32) -> FieldSpec {
    FieldSpec::default_for(k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn table_and_schoolbook_products_agree(k in 2u32..=16, x in any::<u32>(), y in any::<u32>()) {
        let f = field(k);
        let mask = (1u32 << k) - 1;
        let (x, y) = (Elt(x & mask), Elt(y & mask));
        prop_assert_eq!(f.mul(x, y), f.mul_schoolbook(x, y));
    }

    #[test]
    fn distributive(k in 2u32..=12, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let f = field(k);
        let m = (1u32 << k) - 1;
        let (x, y, z) = (Elt(x & m), Elt(y & m), Elt(z & m));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
    }

    #[test]
    fn inverse_and_fermat(k in 2u32..=16, x in 1u32..) {
        let f = field(k);
        let x = Elt(1 + (x - 1) % ((1u32 << k) - 1));
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Elt::ONE);
        prop_assert_eq!(f.pow(x, f.group_order()), Elt::ONE);
        prop_assert_eq!(f.frobenius(x, k), x);
    }

    #[test]
    fn trace_is_additive_and_in_prime_field(k in 2u32..=12, x in any::<u32>(), y in any::<u32>()) {
        let f = field(k);
        let m = (1u32 << k) - 1;
        let (x, y) = (Elt(x & m), Elt(y & m));
        let t = |v| f.trace(1, v).unwrap();
        prop_assert!(t(x).0 <= 1);
        prop_assert_eq!(t(f.add(x, y)), f.add(t(x), t(y)));
    }

    #[test]
    fn unit_factorization_multiplies_back(n in 1u32..=3, x in 1u32..) {
        let f = field(4 * n);
        let x = Elt(1 + (x - 1) % ((1u32 << (4 * n)) - 1));
        let u = unit_factorize(&f, x).unwrap();
        let q = 1u64 << n;
        prop_assert_eq!(f.mul(f.mul(u.a, u.u), u.t), x);
        prop_assert_eq!(f.pow(u.a, q - 1), Elt::ONE);
        prop_assert_eq!(f.pow(u.u, q + 1), Elt::ONE);
        prop_assert_eq!(f.pow(u.t, q * q + 1), Elt::ONE);
    }

    #[test]
    fn c_plus_inverse_roots(m in 2u32..=6, z in 1u32..) {
        let amb = field(2 * m);
        // pick z from the subfield GF(2^m) through the norm map
        let g = amb.generator().unwrap();
        let z = amb.pow(g, ((1u64 << m) + 1) * (u64::from(z) % ((1u64 << m) - 1)));
        let d = chi_decompose(&amb, m, z).unwrap();
        for c in d.roots {
            prop_assert_eq!(amb.add(c, amb.inv(c).unwrap()), z);
        }
        prop_assert_eq!(amb.mul(d.roots[0], d.roots[1]), Elt::ONE);
    }

    #[test]
    fn random_permutation_routes_agree(k in 2u32..=6, seed in any::<u64>(), a in 1u32.., b in any::<u32>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let f = field(k);
        let mut forward: Vec<u32> = (0..1u32 << k).collect();
        forward.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let p = PermTable::from_forward(&f, forward).unwrap();
        let m = (1u32 << k) - 1;
        let a = Elt(1 + (a - 1) % m);
        let b = Elt(b & m);
        let def = bct_entry(&p, a, b).unwrap();
        prop_assert_eq!(def, bct_entry_system(&p, a, b).unwrap());
        prop_assert_eq!(def, bct_entry_pairs_naive(&p, a, b).unwrap());
        prop_assert_eq!(def, boomerang_row(&p, a, 3).unwrap()[b.0 as usize]);
        prop_assert_eq!(def % 2, 0);
    }

    #[test]
    fn ddt_row_partitions_the_field(k in 2u32..=8, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let f = field(k);
        let mut forward: Vec<u32> = (0..1u32 << k).collect();
        forward.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let p = PermTable::from_forward(&f, forward).unwrap();
        let row = ddt_row(&p, Elt::ONE).unwrap();
        prop_assert_eq!(row.iter().sum::<u64>(), f.size());
        prop_assert_eq!(row[0], 0);
    }
}

#[test]
fn table_file_round_trip() {
    let f = field(8);
    let p = PermTable::power(&f, 254).unwrap();
    let dir = tempdir();
    let path = dir.join("inverse.tbl");
    p.write_to(std::fs::File::create(&path).unwrap()).unwrap();
    let back = PermTable::load(&path, &f).unwrap();
    assert_eq!(back.forward(), p.forward());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(parse_table(text.as_bytes()).unwrap(), p.forward());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn table_file_rejects_non_bijections() {
    let f = field(2);
    let text = "0x0 0x1\n0x1 0x1\n0x2 0x2\n0x3 0x3\n";
    let forward = parse_table(text.as_bytes()).unwrap();
    assert!(PermTable::from_forward(&f, forward).is_err());
    assert!(parse_table("0x0 0x1\n0x1".as_bytes()).is_err());
    assert!(parse_table("0x0 0x0\n0x0 0x1\n0x2 0x2\n0x3 0x3\n".as_bytes()).is_err());
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("boomspec-props-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
