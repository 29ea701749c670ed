//! Test-side oracles. The integrator here is an adaptive 7/15-point
//! Gauss–Kronrod rule, written independently of the library's quadrature.

#![allow(dead_code)]

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let s = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// The 15 Kronrod nodes and weights on `[-1, 1]`.
pub fn kronrod15() -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0, WGK[7])];
    for j in 0..7 {
        rule.push((-XGK[j], WGK[j]));
        rule.push((XGK[j], WGK[j]));
    }
    rule
}

/// `∫_a^b f` to accuracy about `tol · max(1, |I|)`, bisecting the interval
/// with the largest error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut pieces = vec![(a, b, gk15(f, a, b))];
    for _ in 0..20_000 {
        let total_err: f64 = pieces.iter().map(|p| p.2 .1).sum();
        let total: f64 = pieces.iter().map(|p| p.2 .0).sum();
        if total_err <= tol * total.abs().max(1.0) {
            break;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        pieces.push((lo, mid, gk15(f, lo, mid)));
        pieces.push((mid, hi, gk15(f, mid, hi)));
    }
    pieces.iter().map(|p| p.2 .0).sum()
}

pub fn integrate_complex(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    Complex64::new(integrate(|x| f(x).re, a, b, tol), integrate(|x| f(x).im, a, b, tol))
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// Exact rationals on `i128`, enough for short hypergeometric sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio { num: s * num / g, den: s * den / g }
    }

    pub fn int(v: i128) -> Self {
        Ratio::new(v, 1)
    }

    pub fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn mul(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.num, self.den * o.den)
    }

    pub fn div(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den, self.den * o.num)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// `Σ_{j≤m} (-m)_j (b)_j / ((2)_j j!) z^j` exactly.
pub fn hyp2f1_rational(m: usize, b: Ratio, z: Ratio) -> Ratio {
    let mut term = Ratio::int(1);
    let mut sum = term;
    for j in 0..m as i128 {
        let top = Ratio::int(j - m as i128).mul(b.add(Ratio::int(j)));
        let bottom = Ratio::int((j + 2) * (j + 1));
        term = term.mul(top).div(bottom).mul(z);
        sum = sum.add(term);
    }
    sum
}
