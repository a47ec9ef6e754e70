mod common;

use common::*;
use rand::Rng;
use simplexproj::project_onto_face_hull;

#[test]
fn projection_is_idempotent_and_orthogonal() {
    let mut r = rng(21);
    for _ in 0..1000 {
        let n = r.gen_range(1..=8);
        let c = random_spd(&mut r, n);
        let a = random_point(&mut r, n, 2.0);
        let face = random_face(&mut r, n);
        let x = project_onto_face_hull(&c, &a, &face).unwrap();

        for j in face.complement(n) {
            assert_eq!(x[j], 0.0);
        }
        assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-9);

        let c_inf = (0..n)
            .map(|i| (0..n).map(|j| c.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tol = 1e-9 * c_inf * (inf_norm(&x) + inf_norm(&a));
        let diff: Vec<f64> = x.iter().zip(&a).map(|(p, q)| p - q).collect();
        let i0 = face.pivot();
        for &i in &face.indices()[1..] {
            let mut dir = vec![0.0; n];
            dir[i0] = 1.0;
            dir[i] = -1.0;
            let residual = c.inner(&diff, &dir).unwrap();
            assert!(residual.abs() <= tol, "residual {residual} > {tol}");
        }

        let again = project_onto_face_hull(&c, &x, &face).unwrap();
        assert!(max_abs_diff(&again, &x) <= 1e-10);
    }
}

#[test]
fn projection_is_closest_point_of_the_hull() {
    let mut r = rng(22);
    for _ in 0..100 {
        let n = r.gen_range(2..=7);
        let c = random_spd(&mut r, n);
        let a = random_point(&mut r, n, 2.0);
        let face = random_face(&mut r, n);
        let x = project_onto_face_hull(&c, &a, &face).unwrap();
        let dx = c.sq_distance(&a, &x).unwrap();
        for _ in 0..100 {
            // affine combination of the face's vertices
            let mut y = vec![0.0; n];
            let mut coeffs: Vec<f64> = face.indices().iter().map(|_| r.gen_range(-2.0..2.0)).collect();
            let shift = (coeffs.iter().sum::<f64>() - 1.0) / coeffs.len() as f64;
            coeffs.iter_mut().for_each(|v| *v -= shift);
            for (&j, v) in face.indices().iter().zip(coeffs) {
                y[j] = v;
            }
            assert!(dx <= c.sq_distance(&a, &y).unwrap() + 1e-12);
        }
    }
}
