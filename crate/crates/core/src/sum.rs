use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if libm::fabs(*sum) >= libm::fabs(x) {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, z: Complex64) {
        two_sum(&mut self.re, &mut self.c_re, z.re);
        two_sum(&mut self.im, &mut self.c_im, z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.c_re, self.im + self.c_im)
    }
}

/// Compensated real sum.
pub(crate) fn sum_f64<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for x in it {
        two_sum(&mut s, &mut c, x);
    }
    s + c
}
