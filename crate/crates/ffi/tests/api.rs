use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use nilorbit_ffi::*;

fn example(name: &str) -> *mut NilorbitOrbit {
    let name = CString::new(name).unwrap();
    let mut o = ptr::null_mut();
    assert_eq!(
        unsafe { nilorbit_orbit_from_example(name.as_ptr(), &mut o) },
        NilorbitStatus::Ok
    );
    assert!(!o.is_null());
    o
}

fn last_error() -> String {
    let p = nilorbit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn json_round_trip_through_handles() {
    let o = example("twisted-rank4");
    let mut rank = 0;
    let mut weight = 0;
    unsafe {
        assert_eq!(nilorbit_orbit_rank(o, &mut rank), NilorbitStatus::Ok);
        assert_eq!(nilorbit_orbit_weight(o, &mut weight), NilorbitStatus::Ok);
    }
    assert_eq!((rank, weight), (4, -1));
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { nilorbit_orbit_to_json(o, &mut s) },
        NilorbitStatus::Ok
    );
    let mut again = ptr::null_mut();
    assert_eq!(
        unsafe { nilorbit_orbit_from_json(s, &mut again) },
        NilorbitStatus::Ok
    );
    let mut s2 = ptr::null_mut();
    assert_eq!(
        unsafe { nilorbit_orbit_to_json(again, &mut s2) },
        NilorbitStatus::Ok
    );
    assert_eq!(unsafe { CStr::from_ptr(s) }, unsafe { CStr::from_ptr(s2) });
    unsafe {
        nilorbit_string_free(s);
        nilorbit_string_free(s2);
        nilorbit_orbit_free(o);
        nilorbit_orbit_free(again);
    }
}

#[test]
fn verdicts() {
    let split = example("split-rank2");
    let twisted = example("twisted-rank4");
    unsafe {
        assert_eq!(nilorbit_orbit_validate(split), NilorbitStatus::Ok);
        assert_eq!(nilorbit_orbit_validate(twisted), NilorbitStatus::Ok);
        assert_eq!(
            nilorbit_orbit_limit_is_mixed_hodge(split),
            NilorbitStatus::Ok
        );
        assert_eq!(
            nilorbit_orbit_limit_is_mixed_hodge(twisted),
            NilorbitStatus::NegativeVerdict
        );
        assert!(last_error().contains("Gr"), "{}", last_error());

        let mut eps = f64::NAN;
        assert_eq!(
            nilorbit_estimate_epsilon(split, 4, 2.0, 4, 6, &mut eps),
            NilorbitStatus::Ok
        );
        assert!(eps > 0.0);
        assert_eq!(
            nilorbit_estimate_epsilon(twisted, 4, 2.0, 4, 6, &mut eps),
            NilorbitStatus::NotAdmissible
        );
        assert_eq!(
            nilorbit_estimate_epsilon(split, 0, 2.0, 4, 6, &mut eps),
            NilorbitStatus::InvalidArgument
        );
        nilorbit_orbit_free(split);
        nilorbit_orbit_free(twisted);
    }
}

#[test]
fn triangular_system_hand_cases() {
    let c = [1.0];
    let mut rho = 0.0;
    unsafe {
        assert_eq!(
            nilorbit_triangular_system(c.as_ptr(), 2, 0.1, &mut rho),
            NilorbitStatus::Ok
        );
        assert!(rho < 1.0);
        assert_eq!(
            nilorbit_triangular_system(c.as_ptr(), 2, 0.45, &mut rho),
            NilorbitStatus::NegativeVerdict
        );
        assert!(rho >= 1.0);
        assert_eq!(
            nilorbit_triangular_system(ptr::null(), 1, 0.5, ptr::null_mut()),
            NilorbitStatus::Ok
        );
        assert_eq!(
            nilorbit_triangular_system(ptr::null(), 0, 0.5, ptr::null_mut()),
            NilorbitStatus::InvalidArgument
        );
        let negative = [-1.0];
        assert_eq!(
            nilorbit_triangular_system(negative.as_ptr(), 2, 0.1, ptr::null_mut()),
            NilorbitStatus::InvalidArgument
        );
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut o = ptr::null_mut();
    unsafe {
        let bad = CString::new("{\"rank\": 2,\n \"weight\": }").unwrap();
        assert_eq!(
            nilorbit_orbit_from_json(bad.as_ptr(), &mut o),
            NilorbitStatus::Parse
        );
        assert!(last_error().starts_with("line 2"), "{}", last_error());
        assert!(o.is_null());

        // invalid orbits load and are diagnosed by validation
        let not_nilpotent =
            CString::new(r#"{"rank": 1, "weight": -1, "N": [[1]], "F": {}, "label": ""}"#).unwrap();
        assert_eq!(
            nilorbit_orbit_from_json(not_nilpotent.as_ptr(), &mut o),
            NilorbitStatus::Ok
        );
        assert_eq!(nilorbit_orbit_validate(o), NilorbitStatus::NegativeVerdict);
        assert!(last_error().contains("nilpotent"), "{}", last_error());
        nilorbit_orbit_free(o);
        o = ptr::null_mut();

        let unknown = CString::new("no-such-orbit").unwrap();
        assert_eq!(
            nilorbit_orbit_from_example(unknown.as_ptr(), &mut o),
            NilorbitStatus::InvalidArgument
        );
        assert!(last_error().contains("no-such-orbit"));

        assert_eq!(
            nilorbit_orbit_from_json(ptr::null(), &mut o),
            NilorbitStatus::InvalidArgument
        );
        let mut rank = 0;
        assert_eq!(
            nilorbit_orbit_rank(ptr::null(), &mut rank),
            NilorbitStatus::InvalidArgument
        );
        let name = CString::new("split-rank2").unwrap();
        assert_eq!(
            nilorbit_orbit_from_example(name.as_ptr(), ptr::null_mut()),
            NilorbitStatus::InvalidArgument
        );

        // a successful call clears the message
        let h = example("split-rank2");
        assert!(nilorbit_last_error().is_null());
        nilorbit_orbit_free(h);
        nilorbit_orbit_free(ptr::null_mut());
        nilorbit_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_package() {
    let v = unsafe { CStr::from_ptr(nilorbit_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nilorbit.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "typedef struct NilorbitOrbit NilorbitOrbit;",
        "NILORBIT_STATUS_NEGATIVE_VERDICT = 1",
        "NILORBIT_STATUS_INTERNAL = 5",
        "nilorbit_orbit_from_json",
        "nilorbit_orbit_free",
        "nilorbit_estimate_epsilon",
        "nilorbit_triangular_system",
        "nilorbit_last_error",
    ] {
        assert!(text.contains(name), "header lacks `{name}`");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping the compile check");
        return;
    };
    assert!(cc.status.success());
    let dir = std::env::temp_dir().join(format!("nilorbit-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"nilorbit.h\"\n\
         int main(void) {\n\
           NilorbitOrbit *o = 0;\n\
           NilorbitStatus s = nilorbit_orbit_from_example(\"split-rank2\", &o);\n\
           nilorbit_orbit_free(o);\n\
           return s == NILORBIT_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(&dir).ok();
}
