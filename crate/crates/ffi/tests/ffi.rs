use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use fibercheck_ffi::*;

const ANTICHAIN: &str = r#"
category "Point" {
  object "*"
  arrow "id" "*" "*"
  identity "*" "id"
  compose "id" "id" "id"
}
category "Antichain" {
  object "a"
  object "b"
  arrow "1a" "a" "a"
  arrow "1b" "b" "b"
  identity "a" "1a"
  identity "b" "1b"
  compose "1a" "1a" "1a"
  compose "1b" "1b" "1b"
}
functor "antichain" "Antichain" "Point" {
  object "a" "*"
  object "b" "*"
  arrow "1a" "id"
  arrow "1b" "id"
}
expect "antichain" "antichain" {
  fibration true
  pretopological false
}
"#;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { fc_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = fc_last_error();
    (!p.is_null()).then(|| take_string(p))
}

fn parse(text: &str) -> (FcStatus, *mut FcModel) {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    let st = unsafe { fc_model_parse(c.as_ptr(), &mut m) };
    (st, m)
}

fn flag(cl: *const FcClassification, name: &str) -> (FcStatus, bool) {
    let n = CString::new(name).unwrap();
    let mut v = false;
    let st = unsafe { fc_classification_flag(cl, n.as_ptr(), &mut v) };
    (st, v)
}

#[test]
fn classify_reports_flags_and_text() {
    let (st, m) = parse(ANTICHAIN);
    assert_eq!(st, FcStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { fc_model_functor_count(m, &mut n) }, FcStatus::Ok);
    assert_eq!(n, 1);
    let mut name = ptr::null_mut();
    assert_eq!(unsafe { fc_model_functor_name(m, 0, &mut name) }, FcStatus::Ok);
    assert_eq!(take_string(name), "antichain");

    let mut cl = ptr::null_mut();
    assert_eq!(unsafe { fc_classify(m, ptr::null(), 0, &mut cl) }, FcStatus::Ok);
    assert_eq!(flag(cl, "fibration"), (FcStatus::Ok, true));
    assert_eq!(flag(cl, "pretopological"), (FcStatus::Ok, false));
    assert_eq!(flag(cl, "bogus").0, FcStatus::NotFound);
    assert!(last_error().unwrap().contains("bogus"));

    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { fc_classification_report(cl, FcFormat::Text, false, &mut text) },
        FcStatus::Ok
    );
    assert!(take_string(text).contains("summary: fibration, not pretopological"));
    let mut machine = ptr::null_mut();
    unsafe { fc_classification_report(cl, FcFormat::Machine, true, &mut machine) };
    assert!(take_string(machine).contains("flag.fibration=true"));

    unsafe {
        fc_classification_free(cl);
        fc_model_free(m);
    }
}

#[test]
fn verify_and_validate_pass_on_a_good_model() {
    let (_, m) = parse(ANTICHAIN);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { fc_validate(m, &mut rep) }, FcStatus::Ok);
    assert!(take_string(rep).contains("functor antichain: valid"));
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { fc_verify(m, &mut rep) }, FcStatus::Ok);
    assert!(take_string(rep).contains("0 failed"));
    unsafe { fc_model_free(m) };
}

#[test]
fn wrong_expectations_fail_verification() {
    let (_, m) = parse(&ANTICHAIN.replace("pretopological false", "pretopological true"));
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { fc_verify(m, &mut rep) }, FcStatus::Failed);
    assert!(take_string(rep).contains("FAIL [expected flags] antichain"));
    unsafe { fc_model_free(m) };
}

#[test]
fn broken_identity_law_fails_validation() {
    let text = ANTICHAIN.replace(r#"compose "1a" "1a" "1a""#, "");
    let (st, m) = parse(&text);
    assert_eq!(st, FcStatus::Ok);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { fc_validate(m, &mut rep) }, FcStatus::Failed);
    assert!(take_string(rep).contains("violation"));
    let mut cl = ptr::null_mut();
    assert_eq!(unsafe { fc_classify(m, ptr::null(), 0, &mut cl) }, FcStatus::InvalidInput);
    assert!(cl.is_null());
    unsafe { fc_model_free(m) };
}

#[test]
fn parse_errors_carry_position() {
    let (st, m) = parse("category \"C\" {\n  objekt \"a\"\n}\n");
    assert_eq!(st, FcStatus::InvalidInput);
    assert!(m.is_null());
    assert_eq!(last_error().unwrap(), "line 2, column 3: unknown key `objekt` in category");
}

#[test]
fn null_arguments_are_rejected() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { fc_model_parse(ptr::null(), &mut m) }, FcStatus::NullArgument);
    let mut n = 0usize;
    assert_eq!(unsafe { fc_model_functor_count(ptr::null(), &mut n) }, FcStatus::NullArgument);
    let c = CString::new(ANTICHAIN).unwrap();
    assert_eq!(unsafe { fc_model_parse(c.as_ptr(), ptr::null_mut()) }, FcStatus::NullArgument);
    unsafe {
        fc_model_free(ptr::null_mut());
        fc_classification_free(ptr::null_mut());
        fc_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_last_error() {
    let _ = parse("nonsense");
    assert!(last_error().is_some());
    let (st, m) = parse(ANTICHAIN);
    assert_eq!(st, FcStatus::Ok);
    assert!(last_error().is_none());
    unsafe { fc_model_free(m) };
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(fc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn reads_corpus_files() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus/v1/fintop1.model");
    let p = CString::new(path.to_str().unwrap()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { fc_model_read(p.as_ptr(), &mut m) }, FcStatus::Ok);
    let mut cl = ptr::null_mut();
    let name = CString::new("U_FinTop(1)").unwrap();
    assert_eq!(unsafe { fc_classify(m, name.as_ptr(), 0, &mut cl) }, FcStatus::Ok);
    assert_eq!(flag(cl, "topological"), (FcStatus::Ok, true));
    unsafe {
        fc_classification_free(cl);
        fc_model_free(m);
    }
    let missing = CString::new("/nonexistent/x.model").unwrap();
    assert_eq!(unsafe { fc_model_read(missing.as_ptr(), &mut m) }, FcStatus::InvalidInput);
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/fibercheck.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["fc_model_parse", "fc_classify", "fc_last_error", "fc_string_free", "FC_STATUS_PANIC"] {
        assert!(text.contains(sym), "{sym} missing from the header");
    }
    let src = tempfile::Builder::new().suffix(".c").tempfile().unwrap();
    std::fs::write(
        src.path(),
        "#include \"fibercheck.h\"\n\
         int main(void) {\n\
           FcModel *m = 0;\n\
           FcStatus st = fc_model_parse(\"\", &m);\n\
           char *e = fc_last_error();\n\
           fc_string_free(e);\n\
           fc_model_free(m);\n\
           return st == FC_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(src.path())
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
