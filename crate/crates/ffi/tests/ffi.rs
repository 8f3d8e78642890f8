use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use variant_lab_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    vl_string_free(s);
    out
}

unsafe fn last_error() -> String {
    take(vl_last_error_message())
}

#[test]
fn position_lifecycle() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(vl_position_new(cstr("torpedo").as_ptr(), &mut p), VlStatus::Ok);
        let mut n = 0;
        assert_eq!(vl_perft(p, 3, &mut n), VlStatus::Ok);
        assert_eq!(n, 9194);

        let mut moves = ptr::null_mut();
        assert_eq!(vl_position_legal_moves(p, &mut moves), VlStatus::Ok);
        let moves = take(moves);
        assert_eq!(moves.split(' ').count(), 20);
        assert!(moves.starts_with("b1a3 b1c3 g1f3 g1h3 a2a3 a2a4"));

        assert_eq!(vl_position_apply(p, cstr("e2e4").as_ptr()), VlStatus::Ok);
        let mut fen = ptr::null_mut();
        assert_eq!(vl_position_to_fen(p, &mut fen), VlStatus::Ok);
        assert!(take(fen).ends_with("variant=torpedo"));
        vl_position_free(p);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(vl_position_new(cstr("chess960").as_ptr(), &mut p), VlStatus::UnknownVariant);
        assert!(p.is_null());
        assert!(last_error().contains("chess960"));
        assert_eq!(vl_position_new(ptr::null(), &mut p), VlStatus::NullPointer);
        assert_eq!(vl_position_from_fen(cstr("8/8/8 w").as_ptr(), &mut p), VlStatus::BadFen);

        let bad = [0xffu8, 0];
        assert_eq!(vl_position_new(bad.as_ptr().cast(), &mut p), VlStatus::InvalidUtf8);

        assert_eq!(vl_position_new(cstr("classical").as_ptr(), &mut p), VlStatus::Ok);
        assert_eq!(vl_position_apply(p, cstr("e2e5").as_ptr()), VlStatus::IllegalMove);
        assert_eq!(vl_position_apply(p, cstr("zz").as_ptr()), VlStatus::IllegalMove);
        let mut fen = ptr::null_mut();
        vl_position_to_fen(p, &mut fen);
        assert!(take(fen).starts_with("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"));
        assert_eq!(vl_perft(p, 1, ptr::null_mut()), VlStatus::NullPointer);
        vl_position_free(p);
        vl_position_free(ptr::null_mut());
        vl_string_free(ptr::null_mut());
    }
}

#[test]
fn status_tracks_mate_stalemate_and_repetition() {
    unsafe {
        let (mut o, mut r) = (VlOutcome::Ongoing, VlReason::None);
        let mut p = ptr::null_mut();
        let fen = cstr("4k3/4P3/5K2/8/8/8/8/8 w - - 0 1 variant=stalematewin");
        assert_eq!(vl_position_from_fen(fen.as_ptr(), &mut p), VlStatus::Ok);
        assert_eq!(vl_position_apply(p, cstr("f6e6").as_ptr()), VlStatus::Ok);
        assert_eq!(vl_position_status(p, &mut o, &mut r), VlStatus::Ok);
        assert_eq!((o, r), (VlOutcome::WhiteWins, VlReason::Stalemate));
        assert_eq!(vl_position_apply(p, cstr("e8e7").as_ptr()), VlStatus::GameOver);
        vl_position_free(p);

        assert_eq!(vl_position_new(cstr("classical").as_ptr(), &mut p), VlStatus::Ok);
        for _ in 0..2 {
            for m in ["g1f3", "g8f6", "f3g1", "f6g8"] {
                assert_eq!(vl_position_apply(p, cstr(m).as_ptr()), VlStatus::Ok);
            }
        }
        assert_eq!(vl_position_status(p, &mut o, &mut r), VlStatus::Ok);
        assert_eq!((o, r), (VlOutcome::Draw, VlReason::ThreefoldRepetition));
        vl_position_free(p);
    }
}

#[test]
fn comparisons_match_core() {
    use variant_lab::stats::{draw_rate_comparison, OutcomeCounts};
    let a = VlCounts { wins: 3, draws: 10, losses: 2 };
    let b = VlCounts { wins: 5, draws: 4, losses: 6 };
    let mut out = VlProbability { probability: 0.0, std_error: 0.0 };
    unsafe {
        assert_eq!(vl_draw_rate_comparison(a, b, 20_000, 9, &mut out), VlStatus::Ok);
    }
    let core = draw_rate_comparison(&OutcomeCounts::new(3, 10, 2), &OutcomeCounts::new(5, 4, 6), 20_000, 9).unwrap();
    assert_eq!(out.probability, core.probability);
    assert_eq!(out.std_error, core.std_error);

    unsafe {
        assert_eq!(vl_expected_score_comparison(a, b, 0, 1, &mut out), VlStatus::InvalidArgument);
        assert!(!last_error().is_empty());
    }
}

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/variant_lab.h")).unwrap();
    for name in [
        "vl_position_new",
        "vl_position_from_fen",
        "vl_position_free",
        "vl_position_to_fen",
        "vl_position_legal_moves",
        "vl_position_apply",
        "vl_position_status",
        "vl_perft",
        "vl_draw_rate_comparison",
        "vl_expected_score_comparison",
        "vl_last_error_message",
        "vl_string_free",
        "typedef struct VlPosition VlPosition;",
        "VL_STATUS_ILLEGAL_MOVE = 5",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles the C smoke program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libvariant_lab_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let root = env!("CARGO_MANIFEST_DIR");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{root}/include"))
        .arg(format!("{root}/tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler ({cc})");
        return;
    };
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
