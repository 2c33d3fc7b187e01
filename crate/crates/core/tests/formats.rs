use std::collections::BTreeMap;

use hermite_core::algebra::{rat, Matrix, Rational};
use hermite_core::catalog;
use hermite_core::symbol::{load_mask, save_mask, HermiteMask};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=500).prop_map(|(p, q)| rat(p, q).unwrap())
}

fn mask() -> impl Strategy<Value = HermiteMask> {
    (2usize..=3, -4i64..=2).prop_flat_map(|(d, lo)| {
        prop::collection::vec(prop::collection::vec(rational(), d * d), 1..5).prop_map(
            move |blocks| {
                let matrices: BTreeMap<i64, Matrix> = blocks
                    .into_iter()
                    .enumerate()
                    .map(|(i, data)| (lo + i as i64, Matrix::new(d, d, data).unwrap()))
                    .collect();
                HermiteMask::new(d, matrices)
                    .unwrap_or_else(|_| catalog::merrien(&rat(1, 2).unwrap(), &rat(1, 3).unwrap()))
            },
        )
    })
}

proptest! {
    #[test]
    fn save_then_load_is_identity(m in mask(), tau in rational()) {
        let m = m.with_name("random").with_tau_hint(tau);
        let bytes = save_mask(&m);
        let back = load_mask(&bytes).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(save_mask(&back), bytes);
    }
}

#[test]
fn catalog_masks_round_trip() {
    for m in catalog::reference_instances() {
        assert_eq!(load_mask(&save_mask(&m)).unwrap(), m);
    }
}
