use std::ffi::{CStr, CString};
use std::ptr;

use ffdg_ffi::*;
use FfdgStatus::*;

fn last_error() -> String {
    let p = ffdg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn field(spec: &str) -> *mut FfdgField {
    let s = CString::new(spec).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ffdg_field_parse(s.as_ptr(), &mut f) }, FFDG_OK);
    f
}

#[test]
fn field_handles() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ffdg_field_new(3, 2, &mut f), FFDG_OK);
        assert!(ffdg_last_error().is_null());
        assert_eq!(ffdg_field_order(f), 9);
        let mut t = 0u32;
        assert_eq!(ffdg_field_trace(f, 1, &mut t), FFDG_OK);
        assert_eq!(t, 2);
        let mut z = FfdgComplex::default();
        assert_eq!(ffdg_field_additive_char(f, 0, &mut z), FFDG_OK);
        assert_eq!((z.re, z.im), (1.0, 0.0));
        let mut eta = 0i8;
        assert_eq!(ffdg_field_quadratic_char(f, 1, &mut eta), FFDG_OK);
        assert_eq!(eta, 1);
        assert_eq!(
            ffdg_field_quadratic_char(f, 0, &mut eta),
            FFDG_INVALID_ARGUMENT
        );
        assert_eq!(ffdg_field_trace(f, 9, &mut t), FFDG_INVALID_ARGUMENT);
        assert!(last_error().contains("outside"));
        ffdg_field_free(f);
        ffdg_field_free(ptr::null_mut());

        assert_eq!(ffdg_field_new(4, 1, &mut f), FFDG_INVALID_ARGUMENT);
        assert_eq!(ffdg_field_new(3, 1, ptr::null_mut()), FFDG_NULL_POINTER);
        assert_eq!(ffdg_field_order(ptr::null()), 0);
        assert_eq!(ffdg_field_trace(ptr::null(), 0, &mut t), FFDG_NULL_POINTER);
        let bad = CString::new("6").unwrap();
        assert_eq!(
            ffdg_field_parse(bad.as_ptr(), &mut f),
            FFDG_INVALID_ARGUMENT
        );
    }
}

#[test]
fn character_sums() {
    let f = field("5");
    unsafe {
        let mut s = FfdgSum::default();
        assert_eq!(ffdg_gauss_sum(f, &mut s), FFDG_OK);
        assert!((s.magnitude - 5f64.sqrt()).abs() < 1e-12);
        assert!(s.has_bound && s.passes);
        assert_eq!(ffdg_kloosterman(f, 0, 0, &mut s), FFDG_OK);
        assert!(!s.has_bound);
        assert!((s.value.re - 4.0).abs() < 1e-12);
        assert_eq!(ffdg_salie(f, 1, 1, &mut s), FFDG_OK);
        assert!(s.has_bound && s.passes && s.magnitude <= s.bound);
        let mut mean = 0.0;
        assert_eq!(ffdg_sigma_mean(f, 2, 1, &mut mean), FFDG_OK);
        // |S_1| in F_5^2 is 4, so the mean is 4 * 5 / 25.
        assert!((mean - 0.8).abs() < 1e-12);
        assert_eq!(ffdg_sigma_mean(f, 2, 0, &mut mean), FFDG_INVALID_ARGUMENT);
        ffdg_field_free(f);
    }
}

#[test]
fn counting() {
    let f = field("3");
    unsafe {
        let all: Vec<u32> = (0..9).collect();
        let mut set = ptr::null_mut();
        assert_eq!(
            ffdg_set_from_indices(f, 2, all.as_ptr(), all.len(), &mut set),
            FFDG_OK
        );
        assert_eq!(ffdg_set_len(set), 9);
        assert_eq!(ffdg_set_density(set), 1.0);

        let mut g = ptr::null_mut();
        assert_eq!(
            ffdg_graph_generate(FfdgGraphKind::FFDG_GRAPH_PATH, 3, 1, &mut g),
            FFDG_OK
        );
        assert_eq!(ffdg_graph_edge_count(g), 2);
        let mut c = FfdgCount::default();
        assert_eq!(ffdg_count(set, g, false, 0, &mut c), FFDG_OK);
        assert_eq!((c.c, c.c_star), (144, 108));
        assert!((c.n - 16.0 / 9.0).abs() < 1e-12);
        let mut slow = FfdgCount::default();
        assert_eq!(ffdg_count(set, g, true, 100_000, &mut slow), FFDG_OK);
        assert_eq!(c, slow);
        assert_eq!(ffdg_count(set, g, true, 10, &mut slow), FFDG_BUDGET);
        ffdg_graph_free(g);

        let text = CString::new("n 3\ne 0 1 1\ne 1 2 1\ne 0 2 1\n").unwrap();
        assert_eq!(ffdg_graph_parse(text.as_ptr(), &mut g), FFDG_OK);
        assert_eq!(ffdg_count(set, g, false, 0, &mut c), FFDG_OK);
        assert_eq!((c.c, c.c_star), (36, 36));
        ffdg_graph_free(g);

        let bad = CString::new("n 2\ne 0 0 1\n").unwrap();
        assert_eq!(
            ffdg_graph_parse(bad.as_ptr(), &mut g),
            FFDG_INVALID_ARGUMENT
        );
        let bad = CString::new("n x\n").unwrap();
        assert_eq!(ffdg_graph_parse(bad.as_ptr(), &mut g), FFDG_PARSE);
        assert!(!last_error().is_empty());
        assert_eq!(
            ffdg_count(set, ptr::null(), false, 0, &mut c),
            FFDG_NULL_POINTER
        );
        ffdg_set_free(set);

        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(ffdg_set_random(f, 3, 0.5, 7, &mut a), FFDG_OK);
        assert_eq!(ffdg_set_random(f, 3, 0.5, 7, &mut b), FFDG_OK);
        assert_eq!(ffdg_set_len(a), ffdg_set_len(b));
        assert_eq!(ffdg_set_random(f, 3, 2.0, 7, &mut b), FFDG_INVALID_ARGUMENT);
        ffdg_set_free(a);

        let src = CString::new("set q=3^1 d=2\n0\n4\n8\n").unwrap();
        assert_eq!(ffdg_set_parse(src.as_ptr(), &mut a), FFDG_OK);
        assert_eq!(ffdg_set_len(a), 3);
        ffdg_set_free(a);
        assert_eq!(ffdg_set_from_indices(f, 2, ptr::null(), 0, &mut a), FFDG_OK);
        assert_eq!(ffdg_set_len(a), 0);
        ffdg_set_free(a);
        assert_eq!(
            ffdg_set_from_indices(f, 2, ptr::null(), 3, &mut a),
            FFDG_NULL_POINTER
        );
        ffdg_field_free(f);
    }
}

#[test]
fn header_is_generated() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ffdg.h")).unwrap();
    for name in [
        "ffdg_field_new",
        "ffdg_count",
        "ffdg_last_error",
        "FFDG_OVERFLOW",
        "typedef struct FfdgPointSet FfdgPointSet",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
