mod common;

use common::*;
use proptest::prelude::*;

use pqfourier::connection::LTObject;
use pqfourier::fourier::fourier_object;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn slope_ramification_and_irregularity_laws(e in admissible_factor()) {
        check_fourier_laws(&e)?;
    }

    #[test]
    fn twisted_inputs_give_isomorphic_images(e in admissible_factor(), k in 0i64..4) {
        let a = pqfourier::fourier::fourier_factor(&e).unwrap();
        let b = pqfourier::fourier::fourier_factor(&e.twist(k).unwrap()).unwrap();
        prop_assert!(a.iso_equal(&b).unwrap().is_some(), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn objects_transform_componentwise(a in admissible_factor(), b in admissible_factor()) {
        let o = LTObject::single(a.clone()).unwrap().direct_sum(&LTObject::single(b.clone()).unwrap());
        let image = fourier_object(&o).unwrap();
        let expect = LTObject::single(pqfourier::fourier::fourier_factor(&a).unwrap()).unwrap()
            .direct_sum(&LTObject::single(pqfourier::fourier::fourier_factor(&b).unwrap()).unwrap());
        prop_assert_eq!(image, expect);
    }
}
