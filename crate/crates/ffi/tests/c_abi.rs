use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use planepart_ffi::*;

fn text(buf: &[u8]) -> &str {
    CStr::from_bytes_until_nul(buf).unwrap().to_str().unwrap()
}

#[test]
fn family_and_zeros() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(pp_family_new(24, 0, &mut f), PpStatus::Ok);
        let mut buf = [0u8; 64];
        let mut len = 0;
        assert_eq!(pp_family_eval(f, 3, c"2".as_ptr(), buf.as_mut_ptr().cast(), 64, &mut len), PpStatus::Ok);
        assert_eq!(text(&buf), "18");
        assert_eq!(pp_bo_largest_zero(f, 12, 12, 1, buf.as_mut_ptr().cast(), 64, &mut len), PpStatus::Ok);
        assert_eq!(text(&buf), "0.3");
        assert_eq!(pp_bo_largest_zero(f, 13, 12, 1, buf.as_mut_ptr().cast(), 64, &mut len), PpStatus::InvalidArgument);
        assert_eq!(pp_family_eval(f, 3, ptr::null(), buf.as_mut_ptr().cast(), 64, &mut len), PpStatus::NullPointer);
        pp_family_free(f);
        pp_family_free(ptr::null_mut());
        pp_table_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "planepart-ffi"])
        .current_dir(&manifest)
        .status()
        .unwrap();
    assert!(built.success(), "cargo build of the static library failed");
    let lib = target_dir().join("libplanepart_ffi.a");
    let out = tempfile_path("planepart_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
