//! Minimal double-double arithmetic for the Bessel series kernels.
//!
//! A value is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 32 significant decimal digits. The ascending Bessel series cancel
//! up to ~e^{2x} of their leading digits near the series/asymptotic
//! crossover, which is far more than f64 can absorb; accumulating in
//! double-double keeps the final f64 result at full precision.
//!
//! Only the operations the series need are implemented. Algorithms follow
//! Dekker (1971) and the QD library of Hida, Li and Bailey.

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two f64 values as a Dd.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two f64 values as a Dd.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }


    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, other);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, other);
        let p2 = p2 + self.lo * other;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd { hi: s1, lo: s2 }.add_f64(q3)
    }

    #[inline]
    pub fn div_f64(self, other: f64) -> Dd {
        self.div(Dd::from_f64(other))
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    /// Scale by 2^n (exact).
    #[inline]
    pub fn ldexp(self, n: i32) -> Dd {
        let s = f64::powi(2.0, n);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// sqrt for hi > 0; one Newton correction of the f64 seed.
    pub fn sqrt(self) -> Dd {
        debug_assert!(self.hi >= 0.0);
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let y0 = self.hi.sqrt();
        // y = y0 + (self - y0^2) / (2 y0)
        let r = self.sub(Dd::from_prod(y0, y0));
        r.div_f64(2.0 * y0).add_f64(y0)
    }

    /// exp(self) via range reduction to |r| <= ln2/2 and a Taylor sum.
    pub fn exp(self) -> Dd {
        let k = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f64(k));
        let mut term = r;
        let mut sum = Dd::ONE.add(r);
        let mut n = 2.0;
        loop {
            term = term.mul(r).div_f64(n);
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 || n > 40.0 {
                break;
            }
            n += 1.0;
        }
        sum.ldexp(k as i32)
    }

    /// Natural log for hi > 0; one Newton correction of the f64 seed.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y0 = self.hi.ln();
        // self * exp(-y0) = 1 + d with |d| ~ 1e-16
        let r = self.mul(Dd::from_f64(-y0).exp());
        let d = r.add_f64(-1.0);
        // ln(1+d) = d - d^2/2 + d^3/3 - ...
        let corr = d.mul(Dd::ONE.sub(d.mul_f64(0.5)).add(d.mul(d).div_f64(3.0)));
        corr.add_f64(y0)
    }

    /// self^e for hi > 0.
    #[inline]
    pub fn powf(self, e: f64) -> Dd {
        self.ln().mul_f64(e).exp()
    }

    /// sinh(self), accurate for small arguments.
    pub fn sinh(self) -> Dd {
        if self.hi.abs() < 0.5 {
            // odd Taylor series, no cancellation for small arguments
            let sq = self.mul(self);
            let mut term = self;
            let mut sum = self;
            let mut n = 1.0;
            loop {
                term = term.mul(sq).div_f64((2.0 * n) * (2.0 * n + 1.0));
                sum = sum.add(term);
                if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-300) || n > 25.0 {
                    break;
                }
                n += 1.0;
            }
            sum
        } else {
            let e = self.exp();
            e.sub(e.recip()).mul_f64(0.5)
        }
    }

    /// cosh(self).
    pub fn cosh(self) -> Dd {
        let e = self.exp();
        e.add(e.recip()).mul_f64(0.5)
    }
}

pub(crate) const LN2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

pub(crate) const EULER_GAMMA: Dd = Dd {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

/// Taylor coefficients of 1/Gamma(1+z) at z=0, split to double-double.
/// Truncation below 1e-35 for |z| <= 1.
const RECIP_GAMMA_TAYLOR: [Dd; 47] = [
    Dd { hi: 1.0, lo: 0.0 },
    Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 },
    Dd { hi: -0.6558780715202539, lo: 2.137185197068536e-17 },
    Dd { hi: -0.04200263503409524, lo: 1.4920306285650505e-18 },
    Dd { hi: 0.16653861138229148, lo: 1.0189144546842026e-17 },
    Dd { hi: -0.04219773455554433, lo: -3.3579992682480134e-18 },
    Dd { hi: -0.009621971527876973, lo: -5.300031368830263e-19 },
    Dd { hi: 0.0072189432466631, lo: -3.6006537063394283e-19 },
    Dd { hi: -0.0011651675918590652, lo: 5.659947853880981e-20 },
    Dd { hi: -0.00021524167411495098, lo: 2.3758686180729364e-21 },
    Dd { hi: 0.0001280502823881162, lo: -9.359124499198967e-21 },
    Dd { hi: -2.013485478078824e-05, lo: 3.0488773972037385e-23 },
    Dd { hi: -1.2504934821426706e-06, lo: -2.66214092271898e-23 },
    Dd { hi: 1.133027231981696e-06, lo: -4.622235212104869e-23 },
    Dd { hi: -2.056338416977607e-07, lo: -3.0061601618645134e-24 },
    Dd { hi: 6.116095104481416e-09, lo: -2.693458298171306e-25 },
    Dd { hi: 5.002007644469223e-09, lo: -1.538123614056751e-26 },
    Dd { hi: -1.18127457048702e-09, lo: -1.0052356155716208e-25 },
    Dd { hi: 1.0434267116911005e-10, lo: -2.9298419956825035e-27 },
    Dd { hi: 7.782263439905071e-12, lo: 4.397255556595848e-28 },
    Dd { hi: -3.696805618642206e-12, lo: 2.7050034921703885e-28 },
    Dd { hi: 5.100370287454476e-13, lo: 2.253001461085878e-29 },
    Dd { hi: -2.0583260535665066e-14, lo: -1.4747481491954336e-30 },
    Dd { hi: -5.348122539423018e-15, lo: -1.6208384686356568e-31 },
    Dd { hi: 1.2267786282382608e-15, lo: -5.072915146023867e-32 },
    Dd { hi: -1.1812593016974588e-16, lo: 6.422257838149681e-33 },
    Dd { hi: 1.1866922547516004e-18, lo: -4.2037265494226014e-35 },
    Dd { hi: 1.4123806553180319e-18, lo: -7.576946701116294e-35 },
    Dd { hi: -2.29874568443537e-19, lo: 1.3335481917069145e-36 },
    Dd { hi: 1.7144063219273374e-20, lo: 5.230715150426935e-38 },
    Dd { hi: 1.337351730493693e-22, lo: 2.6434059649079228e-39 },
    Dd { hi: -2.0542335517666728e-22, lo: 3.6856892424568953e-39 },
    Dd { hi: 2.736030048608e-23, lo: -2.8599315416397774e-39 },
    Dd { hi: -1.7323564459105165e-24, lo: -1.7540883508197598e-40 },
    Dd { hi: -2.3606190244992872e-26, lo: -1.260225016995785e-42 },
    Dd { hi: 1.8649829417172943e-26, lo: 8.774775617290965e-43 },
    Dd { hi: -2.2180956242071973e-27, lo: 6.809640315042753e-44 },
    Dd { hi: 1.2977819749479937e-28, lo: -3.325692466804093e-45 },
    Dd { hi: 1.1806974749665284e-30, lo: -4.184949275966516e-48 },
    Dd { hi: -1.124584349277088e-30, lo: -2.01842815487355e-47 },
    Dd { hi: 1.277085175140866e-31, lo: 1.0535632367878753e-47 },
    Dd { hi: -7.391451169615141e-33, lo: 1.8114253268366145e-49 },
    Dd { hi: 1.1347502575542158e-35, lo: -4.9791058715013306e-52 },
    Dd { hi: 4.639134641058722e-35, lo: 2.6040634859975098e-52 },
    Dd { hi: -5.3473368184391986e-36, lo: -2.3112956912714733e-52 },
    Dd { hi: 3.2079959236133524e-37, lo: 2.002602532430018e-53 },
    Dd { hi: -4.4458297365507567e-39, lo: -2.221752100199567e-55 },
];

/// 1/Gamma(1+z) for |z| <= 1, double-double accurate.
///
/// Takes z as a Dd so that callers forming z by subtraction (x - 1 with x
/// near 0) can pass the exact two_sum result; rounding z to f64 first
/// would wipe out the small-x information entirely.
pub(crate) fn recip_gamma1p_dd(z: Dd) -> Dd {
    debug_assert!((-1.0..=1.0).contains(&z.hi));
    let mut acc = Dd::ZERO;
    for c in RECIP_GAMMA_TAYLOR.iter().rev() {
        acc = acc.mul(z).add(*c);
    }
    acc
}

#[inline]
pub(crate) fn recip_gamma1p(z: f64) -> Dd {
    recip_gamma1p_dd(Dd::from_f64(z))
}

/// ln Gamma(1+z) for |z| <= 1, z != -1.
pub(crate) fn ln_gamma1p(z: f64) -> Dd {
    recip_gamma1p(z).recip().ln()
}
