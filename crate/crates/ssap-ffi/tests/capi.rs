//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, explicit frees.

use std::ptr;

use ssap_ffi::*;

#[test]
fn version_is_a_c_string() {
    let p = ssap_version();
    assert!(!p.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(p) }.to_str().unwrap();
    assert_eq!(s, env!("CARGO_PKG_VERSION"));
}

#[test]
fn poisson_threshold_round_trip() {
    unsafe {
        let mut prior: *mut SsapPrior = ptr::null_mut();
        assert_eq!(ssap_prior_new_poisson(2.0, &mut prior), SsapStatus::Ok);

        let mut mean = 0.0;
        assert_eq!(ssap_prior_mean(prior, &mut mean), SsapStatus::Ok);
        assert!((mean - 2.0).abs() < 1e-12);

        let mut table: *mut SsapThresholds = ptr::null_mut();
        assert_eq!(ssap_thresholds_new(prior, 4, 2, &mut table), SsapStatus::Ok);
        assert_eq!(ssap_thresholds_stages(table), 4);
        assert_eq!(ssap_thresholds_robots(table), 2);

        // Sentinels cross as IEEE infinities.
        let mut v = 0.0;
        assert_eq!(ssap_thresholds_get(table, 4, 4, &mut v), SsapStatus::Ok);
        assert_eq!(v, f64::INFINITY);
        assert_eq!(ssap_thresholds_get(table, 1, 0, &mut v), SsapStatus::Ok);
        assert_eq!(v, f64::NEG_INFINITY);
        // a_{1,2} is the prior mean.
        assert_eq!(ssap_thresholds_get(table, 2, 1, &mut v), SsapStatus::Ok);
        assert!((v - 2.0).abs() < 1e-9);
        assert_eq!(ssap_thresholds_get(table, 4, 0, &mut v), SsapStatus::OutOfRange);

        // Decide: above/below the cutoff.
        let mut deploy = false;
        let mut cutoff = 0.0;
        assert_eq!(
            ssap_decide(table, 2, 1, 5.0, &mut deploy, &mut cutoff),
            SsapStatus::Ok
        );
        assert!(deploy);
        assert!((cutoff - 2.0).abs() < 1e-9);
        assert_eq!(
            ssap_decide(table, 2, 1, 1.0, &mut deploy, &mut cutoff),
            SsapStatus::Ok
        );
        assert!(!deploy);
        assert_eq!(
            ssap_decide(table, 1, 2, 1.0, &mut deploy, &mut cutoff),
            SsapStatus::Infeasible
        );

        // Full run over a sequence.
        let seq = [0.0, 5.0, 1.0, 3.0];
        let mut indices = [0usize; 2];
        let mut total = 0.0;
        let status =
            ssap_run_online(table, seq.as_ptr(), seq.len(), indices.as_mut_ptr(), &mut total);
        assert_eq!(status, SsapStatus::Ok);
        assert_eq!(indices, [2, 4]);
        assert!((total - 8.0).abs() < 1e-12);
        let wrong_len = ssap_run_online(table, seq.as_ptr(), 3, indices.as_mut_ptr(), &mut total);
        assert_eq!(wrong_len, SsapStatus::BadSequenceLength);

        ssap_thresholds_free(table);
        ssap_prior_free(prior);
    }
}

#[test]
fn executor_walks_a_sequence() {
    unsafe {
        let mut prior: *mut SsapPrior = ptr::null_mut();
        let values = [0i64, 1];
        let counts = [1u64, 1];
        let status = ssap_prior_new_histogram(values.as_ptr(), counts.as_ptr(), 2, &mut prior);
        assert_eq!(status, SsapStatus::Ok);

        let mut table: *mut SsapThresholds = ptr::null_mut();
        assert_eq!(ssap_thresholds_new(prior, 2, 1, &mut table), SsapStatus::Ok);

        let mut exec: *mut SsapExecutor = ptr::null_mut();
        assert_eq!(ssap_executor_new(table, &mut exec), SsapStatus::Ok);
        assert_eq!(ssap_executor_robots_remaining(exec), 1);

        // 1 > mean 0.5: deploys at stage 1; stage 2 is a no-op afterwards.
        let mut deploy = false;
        assert_eq!(ssap_executor_step(exec, 1.0, &mut deploy), SsapStatus::Ok);
        assert!(deploy);
        assert_eq!(ssap_executor_robots_remaining(exec), 0);
        assert_eq!(ssap_executor_step(exec, 9.0, &mut deploy), SsapStatus::Ok);
        assert!(!deploy);
        assert!((ssap_executor_total_reward(exec) - 1.0).abs() < 1e-12);
        // Past the horizon: out of range.
        assert_eq!(ssap_executor_step(exec, 9.0, &mut deploy), SsapStatus::OutOfRange);

        ssap_executor_free(exec);
        ssap_thresholds_free(table);
        ssap_prior_free(prior);
    }
}

#[test]
fn error_codes_cover_bad_inputs() {
    unsafe {
        let mut prior: *mut SsapPrior = ptr::null_mut();
        assert_eq!(
            ssap_prior_new_poisson(-1.0, &mut prior),
            SsapStatus::InvalidParameter
        );
        assert_eq!(
            ssap_prior_new_cmp(1.5, 0.0, &mut prior),
            SsapStatus::DivergentSeries
        );
        assert_eq!(
            ssap_prior_new_uniform(2.0, 1.0, &mut prior),
            SsapStatus::InvalidParameter
        );
        assert_eq!(
            ssap_prior_new_poisson(2.0, ptr::null_mut()),
            SsapStatus::NullArgument
        );

        assert_eq!(ssap_prior_new_poisson(2.0, &mut prior), SsapStatus::Ok);
        let mut table: *mut SsapThresholds = ptr::null_mut();
        assert_eq!(
            ssap_thresholds_new(prior, 3, 5, &mut table),
            SsapStatus::Infeasible
        );
        assert_eq!(
            ssap_thresholds_new(ptr::null(), 3, 1, &mut table),
            SsapStatus::NullArgument
        );
        ssap_prior_free(prior);
        // Frees tolerate null.
        ssap_prior_free(ptr::null_mut());
        ssap_thresholds_free(ptr::null_mut());
        ssap_executor_free(ptr::null_mut());
    }
}
