//! Branch-light `exp` for the softmax and GELU inner loops. Accurate to a few
//! ulp over the range the network uses and simple enough to auto-vectorize.

const LOG2E: f64 = std::f64::consts::LOG2_E;
const LN2_HI: f64 = 6.931_471_803_691_238_2e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

#[inline(always)]
pub fn exp(x: f64) -> f64 {
    // clamping keeps 2^k normal, so the scale is built from bits directly
    let x = x.clamp(-708.0, 709.0);
    // round-to-nearest via the 1.5·2^52 shifter; baseline x86-64 has no roundsd
    const SHIFT: f64 = 6_755_399_441_055_744.0;
    let t = x * LOG2E + SHIFT;
    let k = t - SHIFT;
    let r = x - k * LN2_HI - k * LN2_LO;
    // Taylor series to r^12 on |r| <= ln2/2
    let mut p = 1.0 / 479_001_600.0;
    p = p * r + 1.0 / 39_916_800.0;
    p = p * r + 1.0 / 3_628_800.0;
    p = p * r + 1.0 / 362_880.0;
    p = p * r + 1.0 / 40_320.0;
    p = p * r + 1.0 / 5_040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;
    let ki = t.to_bits().wrapping_sub(SHIFT.to_bits());
    p * f64::from_bits(ki.wrapping_add(1023) << 52)
}

#[inline(always)]
pub fn tanh(x: f64) -> f64 {
    let x = x.clamp(-20.0, 20.0);
    let e = exp(2.0 * x);
    (e - 1.0) / (e + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_std() {
        let mut x = -708.0;
        while x < 709.0 {
            let (a, b) = (exp(x), x.exp());
            let tol = 4.0 * f64::EPSILON * b + f64::MIN_POSITIVE;
            assert!((a - b).abs() <= tol, "x={x} {a} vs {b}");
            x += 0.0137;
        }
        assert_eq!(exp(0.0), 1.0);
        assert!(exp(f64::NEG_INFINITY) < 1e-307);
    }

    #[test]
    fn tanh_matches_std() {
        let mut x = -30.0;
        while x < 30.0 {
            assert!((tanh(x) - x.tanh()).abs() < 1e-14, "x={x}");
            x += 0.00731;
        }
    }
}
