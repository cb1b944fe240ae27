use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use crate::scalar::Real;

/// In-place unnormalized multidimensional DFT over a row-major array.
pub(crate) fn transform<T: Real>(data: &mut [Complex<T>], sizes: &[usize], direction: FftDirection) {
    debug_assert_eq!(data.len(), sizes.iter().product::<usize>());
    let mut planner = FftPlanner::<T>::new();
    let mut stride = data.len();
    for &n in sizes {
        stride /= n;
        if n == 1 {
            continue;
        }
        let fft = planner.plan_fft(n, direction);
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        let block = n * stride;
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}
