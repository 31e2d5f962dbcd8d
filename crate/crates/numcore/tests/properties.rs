use numcore::{kl_std_normal, Matrix};
use proptest::prelude::*;

proptest! {
    #[test]
    fn kl_std_normal_is_nonnegative(
        mu in prop::collection::vec(-5.0f64..5.0, 1..20),
        lv in prop::collection::vec(-5.0f64..5.0, 1..20),
    ) {
        let n = mu.len().min(lv.len());
        let mu = Matrix::from_vec(1, n, mu[..n].to_vec()).unwrap();
        let lv = Matrix::from_vec(1, n, lv[..n].to_vec()).unwrap();
        let kl = kl_std_normal(&mu, &lv).unwrap();
        prop_assert!(kl >= 0.0, "kl = {}", kl);
    }

    #[test]
    fn kl_zero_iff_standard(n in 1usize..10) {
        let z = Matrix::zeros(1, n);
        prop_assert_eq!(kl_std_normal(&z, &z).unwrap(), 0.0);
    }
}
