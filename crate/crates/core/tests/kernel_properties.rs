use proptest::prelude::*;
use slepian_core::bachelier::{bl_finite, bridge_noncross, segment_noncross};

proptest! {
    #[test]
    fn bl_finite_monotone(a in -3.0f64..3.0, b in 0.01f64..4.0, t in 0.01f64..20.0, da in 0.0f64..1.0, db in 0.0f64..1.0, dt in 0.0f64..5.0) {
        let p = bl_finite(a, b, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(bl_finite(a + da, b, t).unwrap() >= p - 1e-15);
        prop_assert!(bl_finite(a, b + db, t).unwrap() >= p - 1e-15);
        prop_assert!(bl_finite(a, b, t + dt).unwrap() <= p + 1e-15);
    }

    #[test]
    fn bridge_in_unit_interval_and_monotone(a in -3.0f64..3.0, b in 0.01f64..3.0, sbar in 0.01f64..1.0, gap in 0.0f64..3.0, db in 0.0f64..1.0) {
        let y = a * sbar + b - gap;
        let p = bridge_noncross(a, b, sbar, y).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(bridge_noncross(a, b + db, sbar, y).unwrap() >= p - 1e-15);
    }

    #[test]
    fn segment_is_shifted_bachelier(c in -2.0f64..2.0, d in 0.1f64..3.0, sbar in 0.05f64..0.9, dt in 0.01f64..1.0, gap in 0.0f64..3.0) {
        let y = d + c * sbar - gap;
        let t = sbar + dt;
        let seg = segment_noncross(c, d, sbar, t, y).unwrap();
        let shifted = bl_finite(d + c * sbar - y, c, t - sbar).unwrap();
        prop_assert!((seg - shifted).abs() <= 1e-14);
    }
}

#[test]
fn bridge_vanishes_on_boundary() {
    for (a, b, sbar) in [(0.0, 1.0, 0.5), (1.5, 0.3, 0.8), (-1.0, 2.0, 0.2)] {
        assert_eq!(bridge_noncross(a, b, sbar, a * sbar + b).unwrap(), 0.0);
    }
}
