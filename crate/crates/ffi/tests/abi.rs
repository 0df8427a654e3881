use std::ffi::{c_char, CStr};
use std::ptr;

use ptmodel::maps::DysonMap;
use ptmodel::metric::MetricPolynomial;
use ptmodel::model;
use ptmodel_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        ptm_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn version_matches_core() {
    let v = unsafe { CStr::from_ptr(ptm_version()) };
    assert_eq!(v.to_str().unwrap(), ptmodel::MODEL_VERSION);
}

#[test]
fn hamiltonian_is_row_major() {
    let mut out = [0.0; 9];
    assert_eq!(unsafe { ptm_hamiltonian(3, 0.4, out.as_mut_ptr(), out.len()) }, PtmStatus::Ok);
    let h = model::build_hamiltonian(3, 0.4).unwrap();
    for (idx, v) in out.iter().enumerate() {
        assert_eq!(*v, h[(idx / 3, idx % 3)]);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut out = [0.0; 4];
    assert_eq!(unsafe { ptm_hamiltonian(2, 0.4, out.as_mut_ptr(), 3) }, PtmStatus::BufferTooSmall);
    assert!(last_error().contains("4 needed"));
    assert_eq!(unsafe { ptm_hamiltonian(2, 0.4, ptr::null_mut(), 4) }, PtmStatus::NullPointer);
    assert_eq!(unsafe { ptm_energies(2, 1.5, out.as_mut_ptr(), 4) }, PtmStatus::Domain);
    assert!(last_error().starts_with("outside domain"));
    let mut row = [0i64; 4];
    assert_eq!(unsafe { ptm_pascal_row(4, 5, row.as_mut_ptr(), 4) }, PtmStatus::Argument);
    // success clears the message
    assert_eq!(unsafe { ptm_hamiltonian(2, 0.4, out.as_mut_ptr(), 4) }, PtmStatus::Ok);
    assert_eq!(unsafe { ptm_last_error_message(ptr::null_mut(), 0) }, 0);
}

#[test]
fn message_is_truncated_safely() {
    let mut out = [0.0; 4];
    unsafe { ptm_energies(2, -1.0, out.as_mut_ptr(), 4) };
    let full = unsafe { ptm_last_error_message(ptr::null_mut(), 0) };
    let mut small = [1 as c_char; 5];
    assert_eq!(unsafe { ptm_last_error_message(small.as_mut_ptr(), small.len()) }, full);
    assert_eq!(small[4], 0);
}

#[test]
fn pascal_rows_and_spectrum() {
    let mut row = [0i64; 5];
    assert_eq!(unsafe { ptm_pascal_row(5, 2, row.as_mut_ptr(), 5) }, PtmStatus::Ok);
    assert_eq!(row, [1, 2, 0, -2, -1]);
    let mut eig = [0.0; 3];
    assert_eq!(unsafe { ptm_metric_eigenvalues(3, 0.5, eig.as_mut_ptr(), 3) }, PtmStatus::Ok);
    for (a, b) in eig.iter().zip([0.25, 0.75, 2.25]) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn metric_polynomial_handle() {
    let mut poly = ptr::null_mut();
    assert_eq!(unsafe { ptm_metric_polynomial_solve(4, &mut poly) }, PtmStatus::Ok);
    let mut out = [0.0; 16];
    assert_eq!(unsafe { ptm_metric_polynomial_evaluate(poly, 0.3, out.as_mut_ptr(), 16) }, PtmStatus::Ok);
    let want = MetricPolynomial::solve(4).unwrap().evaluate(0.3);
    for (idx, v) in out.iter().enumerate() {
        assert_eq!(*v, want[(idx / 4, idx % 4)]);
    }
    unsafe { ptm_metric_polynomial_free(poly) };
    unsafe { ptm_metric_polynomial_free(ptr::null_mut()) };
    assert_eq!(unsafe { ptm_metric_polynomial_evaluate(ptr::null(), 0.3, out.as_mut_ptr(), 16) }, PtmStatus::NullPointer);
}

#[test]
fn dyson_map_handle() {
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { ptm_dyson_map_new(2, &mut map) }, PtmStatus::Ok);
    assert_eq!(unsafe { ptm_dyson_map_dim(map) }, 2);
    let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
    let tau = 0.6;
    assert_eq!(unsafe { ptm_dyson_map_coriolis(map, tau, re.as_mut_ptr(), im.as_mut_ptr(), 4) }, PtmStatus::Ok);
    // Σ = [[τ, 1], [1, τ]] / (2i(1 − τ²))
    let scale = -1.0 / (2.0 * (1.0 - tau * tau));
    for (idx, want) in [tau, 1.0, 1.0, tau].iter().enumerate() {
        assert!(re[idx].abs() < 1e-12);
        assert!((im[idx] - want * scale).abs() < 1e-12);
    }
    let mut h = [0.0; 4];
    assert_eq!(unsafe { ptm_dyson_map_hermitian(map, tau, h.as_mut_ptr(), 4) }, PtmStatus::Ok);
    assert!((h[1] - h[2]).abs() < 1e-12);
    let mut omega = [0.0; 4];
    assert_eq!(unsafe { ptm_dyson_map_omega(map, 1.0, omega.as_mut_ptr(), 4) }, PtmStatus::Singular);
    let want = DysonMap::new(2).unwrap().omega(tau).unwrap();
    assert_eq!(unsafe { ptm_dyson_map_omega(map, tau, omega.as_mut_ptr(), 4) }, PtmStatus::Ok);
    assert_eq!(omega[1], want[(0, 1)]);
    unsafe { ptm_dyson_map_free(map) };
}

#[test]
fn evolution_handle() {
    let mut traj = ptr::null_mut();
    let status = unsafe { ptm_evolve(3, 0.0, 0.5, 1e-3, PtmFrame::SFull, ptr::null(), ptr::null(), &mut traj) };
    assert_eq!(status, PtmStatus::Ok);
    assert_eq!(unsafe { ptm_trajectory_len(traj) }, 501);
    assert!(unsafe { ptm_trajectory_norm_drift(traj) } < 1e-10);
    let (mut tau, mut norm, mut re, mut im) = (0.0, 0.0, [0.0; 3], [0.0; 3]);
    let status = unsafe { ptm_trajectory_sample(traj, 500, &mut tau, &mut norm, re.as_mut_ptr(), im.as_mut_ptr()) };
    assert_eq!(status, PtmStatus::Ok);
    assert!((tau - 0.5).abs() < 1e-12);
    assert!(norm > 0.0);
    let status = unsafe { ptm_trajectory_sample(traj, 501, &mut tau, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(status, PtmStatus::Argument);
    unsafe { ptm_trajectory_free(traj) };

    let (psi_re, psi_im) = ([1.0, 0.0], [0.0, 0.0]);
    let status = unsafe { ptm_evolve(2, 0.0, 0.3, 1e-3, PtmFrame::PFrame, psi_re.as_ptr(), psi_im.as_ptr(), &mut traj) };
    assert_eq!(status, PtmStatus::Ok);
    assert!(unsafe { ptm_trajectory_norm_drift(traj) } < 1e-10);
    unsafe { ptm_trajectory_free(traj) };

    let status = unsafe { ptm_evolve(2, 0.0, 1.0, 1e-3, PtmFrame::SFull, ptr::null(), ptr::null(), &mut traj) };
    assert_eq!(status, PtmStatus::Domain);
    let status = unsafe { ptm_evolve(2, 0.0, 0.3, 1e-3, PtmFrame::SFull, psi_re.as_ptr(), ptr::null(), &mut traj) };
    assert_eq!(status, PtmStatus::NullPointer);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/ptmodel.h");
    for name in [
        "ptm_version", "ptm_last_error_message", "ptm_hamiltonian", "ptm_energies", "ptm_metric_eigenvalues",
        "ptm_pascal_row", "ptm_metric_polynomial_solve", "ptm_metric_polynomial_evaluate",
        "ptm_metric_polynomial_free", "ptm_dyson_map_new", "ptm_dyson_map_dim", "ptm_dyson_map_omega",
        "ptm_dyson_map_hermitian", "ptm_dyson_map_coriolis", "ptm_dyson_map_free", "ptm_evolve",
        "ptm_trajectory_len", "ptm_trajectory_norm_drift", "ptm_trajectory_sample", "ptm_trajectory_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct PtmDysonMap PtmDysonMap;"));
}
