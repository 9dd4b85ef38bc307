//! One LSTM direction over a padded batch, with per-timestep activity
//! masking so padded rows carry their state through unchanged.
//!
//! Activations are stored time-major in stacked (T·B) × H arrays: the
//! input projection, the weight-gradient accumulations, and the input
//! gradient each run as a single matrix product over all timesteps; only
//! the recurrent term is sequential.

use ndarray::{s, Array1, Array2, Axis};

use crate::nn::{LstmParams, Scalar};

/// Stacked activations for one direction; row `t*b + bi` is batch row
/// `bi` at time `t`.
pub(crate) struct DirectionCache<F> {
    pub i: Array2<F>,
    pub f: Array2<F>,
    pub g: Array2<F>,
    pub o: Array2<F>,
    pub c: Array2<F>,
    pub tanh_c: Array2<F>,
    pub h: Array2<F>,
}

fn sigmoid<F: Scalar>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

/// Runs one direction. `times` is the processing order (ascending
/// forward, descending backward); `x_all` is (T·B) × D time-major;
/// `masks[t]` holds 1 for rows still inside their sequence at time `t`.
/// Masked-out rows carry the previous step's state unchanged.
pub(crate) fn forward<F: Scalar>(
    params: &LstmParams<F>,
    x_all: &Array2<F>,
    b: usize,
    times: &[usize],
    masks: &[Array1<F>],
) -> DirectionCache<F> {
    let h = params.w_h.shape()[1];
    let n = x_all.nrows();
    debug_assert_eq!(n, times.len() * b);

    // input projection for every timestep at once
    let a_x = x_all.dot(&params.w_x.t());
    let w_h_t = params.w_h.t();

    let mut cache = DirectionCache {
        i: Array2::zeros((n, h)),
        f: Array2::zeros((n, h)),
        g: Array2::zeros((n, h)),
        o: Array2::zeros((n, h)),
        c: Array2::zeros((n, h)),
        tanh_c: Array2::zeros((n, h)),
        h: Array2::zeros((n, h)),
    };
    // running state, updated in place each step
    let mut h_state = Array2::<F>::zeros((b, h));
    let mut c_state = Array2::<F>::zeros((b, h));

    for &t in times {
        let rows = t * b..(t + 1) * b;
        let mask = &masks[t];

        // B × 4H pre-activations: stacked input part + recurrent part
        let mut a = a_x.slice(s![rows, ..]).to_owned();
        a += &h_state.dot(&w_h_t);
        a += &params.b;

        for bi in 0..b {
            let m = mask[bi];
            let one_minus_m = F::one() - m;
            let row = t * b + bi;
            for hi in 0..h {
                let i_v = sigmoid(a[(bi, hi)]);
                let f_v = sigmoid(a[(bi, h + hi)]);
                let g_v = a[(bi, 2 * h + hi)].tanh();
                let o_v = sigmoid(a[(bi, 3 * h + hi)]);
                let cp = c_state[(bi, hi)];
                let hp = h_state[(bi, hi)];
                let c_v = m * (f_v * cp + i_v * g_v) + one_minus_m * cp;
                let tc = c_v.tanh();
                let h_v = m * (o_v * tc) + one_minus_m * hp;
                c_state[(bi, hi)] = c_v;
                h_state[(bi, hi)] = h_v;
                cache.i[(row, hi)] = i_v;
                cache.f[(row, hi)] = f_v;
                cache.g[(row, hi)] = g_v;
                cache.o[(row, hi)] = o_v;
                cache.c[(row, hi)] = c_v;
                cache.tanh_c[(row, hi)] = tc;
                cache.h[(row, hi)] = h_v;
            }
        }
    }
    cache
}

/// Backpropagates one direction, accumulating parameter gradients into
/// `grads` and input gradients into `dx_all` (time-major, shared across
/// directions).
#[allow(clippy::too_many_arguments)]
pub(crate) fn backward<F: Scalar>(
    params: &LstmParams<F>,
    x_all: &Array2<F>,
    b: usize,
    times: &[usize],
    masks: &[Array1<F>],
    cache: &DirectionCache<F>,
    dh_all: &Array2<F>,
    grads: &mut LstmParams<F>,
    dx_all: &mut Array2<F>,
) {
    let h = params.w_h.shape()[1];
    let n = x_all.nrows();
    let zeros = Array2::<F>::zeros((b, h));

    let mut da_all = Array2::<F>::zeros((n, 4 * h));
    let mut dh_carry = Array2::<F>::zeros((b, h));
    let mut dc_carry = Array2::<F>::zeros((b, h));

    for step in (0..times.len()).rev() {
        let t = times[step];
        let mask = &masks[t];
        let c_prev = if step == 0 {
            zeros.view()
        } else {
            let prev = times[step - 1] * b..(times[step - 1] + 1) * b;
            cache.c.slice(s![prev, ..])
        };

        // h = m*(o*tanh_c) + (1-m)*h_prev
        // c = m*(f*c_prev + i*g) + (1-m)*c_prev
        for bi in 0..b {
            let m = mask[bi];
            let one_minus_m = F::one() - m;
            let row = t * b + bi;
            for hi in 0..h {
                let dh_v = dh_all[(row, hi)] + dh_carry[(bi, hi)];
                let tc = cache.tanh_c[(row, hi)];
                let o_v = cache.o[(row, hi)];
                let i_v = cache.i[(row, hi)];
                let f_v = cache.f[(row, hi)];
                let g_v = cache.g[(row, hi)];

                let do_v = m * dh_v * tc;
                let dc_v =
                    dc_carry[(bi, hi)] + m * dh_v * o_v * (F::one() - tc * tc);
                let di_v = m * dc_v * g_v;
                let dg_v = m * dc_v * i_v;
                let df_v = m * dc_v * c_prev[(bi, hi)];

                da_all[(row, hi)] = di_v * i_v * (F::one() - i_v);
                da_all[(row, h + hi)] = df_v * f_v * (F::one() - f_v);
                da_all[(row, 2 * h + hi)] = dg_v * (F::one() - g_v * g_v);
                da_all[(row, 3 * h + hi)] = do_v * o_v * (F::one() - o_v);

                dc_carry[(bi, hi)] = m * dc_v * f_v + one_minus_m * dc_v;
                dh_carry[(bi, hi)] = one_minus_m * dh_v;
            }
        }

        // recurrent path into the previous step
        let da_step = da_all.slice(s![t * b..(t + 1) * b, ..]);
        dh_carry += &da_step.dot(&params.w_h);
    }

    // stacked weight-gradient accumulations
    grads.w_x += &da_all.t().dot(x_all);
    grads.b += &da_all.sum_axis(Axis(0));
    *dx_all += &da_all.dot(&params.w_x);

    // h_prev rows aligned with da rows: the previous processing step's h
    let mut h_prev_all = Array2::<F>::zeros((n, h));
    for step in 1..times.len() {
        let t = times[step];
        let prev = times[step - 1];
        let src = cache.h.slice(s![prev * b..(prev + 1) * b, ..]).to_owned();
        h_prev_all
            .slice_mut(s![t * b..(t + 1) * b, ..])
            .assign(&src);
    }
    grads.w_h += &da_all.t().dot(&h_prev_all);
}
