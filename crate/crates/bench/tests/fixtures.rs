use omegalam::normalize;
use omegalam_bench::{church, church_mul};

#[test]
fn church_mul_normalizes_to_product() {
    for (a, b) in [(0, 3), (2, 3), (4, 5)] {
        let (nf, _) = normalize(&church_mul(a, b), 10_000).unwrap();
        assert_eq!(nf, church(a * b));
    }
}
