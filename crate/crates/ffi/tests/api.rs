use std::ffi::{CStr, CString};
use std::ptr;

use partsemi_ffi::*;

const FULL22: &str = r#"{"n":4,"blocks":[[0,1],[2,3]],"si":{"kind":"full"}}"#;

fn open(json: &str) -> *mut PsInstance {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { ps_instance_from_json(c.as_ptr(), 0, &mut h) };
    assert_eq!(s, PsStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ps_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn counts_and_members() {
    let h = open(FULL22);
    let (mut n, mut count) = (0usize, 0usize);
    unsafe {
        assert_eq!(ps_instance_degree(h, &mut n), PsStatus::Ok);
        assert_eq!(ps_instance_member_count(h, &mut count), PsStatus::Ok);
    }
    assert_eq!((n, count), (4, 64));
    let mut buf = [0usize; 4];
    unsafe {
        assert_eq!(ps_instance_member(h, 0, buf.as_mut_ptr(), 4), PsStatus::Ok);
        assert_eq!(
            ps_instance_member(h, 64, buf.as_mut_ptr(), 4),
            PsStatus::InvalidArgument
        );
        assert_eq!(
            ps_instance_member(h, 0, buf.as_mut_ptr(), 3),
            PsStatus::InvalidArgument
        );
        ps_instance_free(h);
    }
}

#[test]
fn element_and_semigroup_queries() {
    let h = open(FULL22);
    let f = [2usize, 3, 0, 0];
    let mut v = false;
    unsafe {
        assert_eq!(
            ps_is_regular(h, f.as_ptr(), 4, PsMode::Both, &mut v),
            PsStatus::Ok
        );
        assert!(v);
        assert_eq!(
            ps_is_idempotent(h, f.as_ptr(), 4, PsMode::Both, &mut v),
            PsStatus::Ok
        );
        assert!(!v);
        assert_eq!(
            ps_is_unit_regular(h, f.as_ptr(), 4, PsMode::Theorem, &mut v),
            PsStatus::Ok
        );
        assert!(v);
        assert_eq!(
            ps_semigroup_property(h, PsSemigroupProperty::Regular, PsMode::Both, &mut v),
            PsStatus::Ok
        );
        assert!(!v);
        let outsider = [0usize, 2, 0, 0];
        assert_eq!(
            ps_is_regular(h, outsider.as_ptr(), 4, PsMode::Both, &mut v),
            PsStatus::InvalidArgument
        );
        assert!(last_error().contains("not a member"));
        ps_instance_free(h);
    }
}

#[test]
fn green_relations() {
    let h = open(FULL22);
    let f = [2usize, 2, 0, 0];
    let g = [1usize, 1, 3, 3];
    let mut v = false;
    unsafe {
        assert_eq!(
            ps_green_related(
                h,
                PsRelation::D,
                f.as_ptr(),
                g.as_ptr(),
                4,
                PsMode::Both,
                &mut v
            ),
            PsStatus::Ok
        );
        assert!(v);
        assert_eq!(
            ps_green_related(
                h,
                PsRelation::L,
                f.as_ptr(),
                g.as_ptr(),
                4,
                PsMode::Both,
                &mut v
            ),
            PsStatus::Ok
        );
        assert!(!v);
        ps_instance_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            ps_instance_from_json(ptr::null(), 0, &mut h),
            PsStatus::NullPointer
        );
        let bad = CString::new("{\"n\":").unwrap();
        assert_eq!(
            ps_instance_from_json(bad.as_ptr(), 0, &mut h),
            PsStatus::Parse
        );
        assert!(last_error().starts_with("parse error"));
        let open_json =
            CString::new(r#"{"n":2,"blocks":[[0],[1,2]],"si":{"kind":"full"}}"#).unwrap();
        assert_ne!(
            ps_instance_from_json(open_json.as_ptr(), 0, &mut h),
            PsStatus::Ok
        );
        let no_id = CString::new(
            r#"{"n":2,"blocks":[[0],[1]],"si":{"kind":"generated","generators":[[0,0]]}}"#,
        )
        .unwrap();
        assert_eq!(
            ps_instance_from_json(no_id.as_ptr(), 0, &mut h),
            PsStatus::Ok
        );
        let f = [0usize, 0];
        let mut v = false;
        assert_eq!(
            ps_is_unit_regular(h, f.as_ptr(), 2, PsMode::Both, &mut v),
            PsStatus::Precondition
        );
        let mut n = 0;
        assert_eq!(
            ps_instance_member_count(ptr::null(), &mut n),
            PsStatus::NullPointer
        );
        ps_instance_free(h);
        ps_instance_free(ptr::null_mut());
    }
    assert_eq!(
        unsafe { ps_instance_member_count(ptr::null(), ptr::null_mut()) },
        PsStatus::NullPointer
    );
}

#[test]
fn cap_is_enforced() {
    let c = CString::new(FULL22).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { ps_instance_from_json(c.as_ptr(), 10, &mut h) },
        PsStatus::ResourceLimit
    );
}

#[test]
fn verify_returns_machine_report() {
    let mut report = ptr::null_mut();
    let mut passed = false;
    let suite = CString::new("counting").unwrap();
    unsafe {
        assert_eq!(
            ps_verify(3, 0, suite.as_ptr(), &mut report, &mut passed),
            PsStatus::Ok
        );
        assert!(passed);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        ps_string_free(report);
        assert_eq!(text.lines().count(), 36);
        assert!(text.lines().all(|l| l.contains("\"suite\":\"counting\"")));
        let bogus = CString::new("nope").unwrap();
        assert_eq!(
            ps_verify(3, 0, bogus.as_ptr(), &mut report, &mut passed),
            PsStatus::InvalidArgument
        );
        assert_eq!(
            ps_verify(0, 0, ptr::null(), &mut report, &mut passed),
            PsStatus::InvalidArgument
        );
    }
}
