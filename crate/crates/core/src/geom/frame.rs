use nalgebra::{Point3, Rotation3};

use crate::ccs::ContinuousExtrude;

/// Orientation, origin and scale of a sketch plane.
///
/// The rotation is intrinsic `Rz(γ) · Ry(φ) · Rx(θ)`; a world point `w` maps
/// to sketch-local `Rᵀ (w - origin)`, whose `z` is the extrusion axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SketchFrame {
    pub rotation: Rotation3<f64>,
    pub origin: Point3<f64>,
    pub scale: f64,
}

impl SketchFrame {
    pub fn new(theta: f64, phi: f64, gamma: f64, origin: Point3<f64>, scale: f64) -> Self {
        SketchFrame { rotation: Rotation3::from_euler_angles(theta, phi, gamma), origin, scale }
    }

    pub fn from_extrude(e: &ContinuousExtrude) -> Self {
        Self::new(e.theta, e.phi, e.gamma, Point3::from(e.origin), e.scale)
    }

    pub fn to_local(&self, world: &Point3<f64>) -> Point3<f64> {
        Point3::from(self.rotation.inverse_transform_vector(&(world - self.origin)))
    }

    pub fn to_world(&self, local: &Point3<f64>) -> Point3<f64> {
        self.origin + self.rotation * local.coords
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, Vector3};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn euler_order_is_z_then_y_then_x() {
        let (t, p, g) = (0.3, -1.1, 2.0);
        let f = SketchFrame::new(t, p, g, Point3::origin(), 1.0);
        let rx = Rotation3::from_axis_angle(&Vector3::x_axis(), t);
        let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), p);
        let rz = Rotation3::from_axis_angle(&Vector3::z_axis(), g);
        let expected = rz * ry * rx;
        assert!((f.rotation.matrix() - expected.matrix()).norm() < 1e-12);
    }

    #[test]
    fn quarter_turn_about_x_maps_local_z_to_world_minus_y() {
        let f = SketchFrame::new(FRAC_PI_2, 0.0, 0.0, Point3::new(1.0, 2.0, 3.0), 1.0);
        let w = f.to_world(&Point3::new(0.0, 0.0, 1.0));
        assert!((w - Point3::new(1.0, 1.0, 3.0)).norm() < 1e-12);
        let back = f.to_local(&w);
        assert!((back - Point3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn rotation_is_orthonormal(t in 0.0f64..3.2, p in -3.2f64..3.2, g in -3.2f64..3.2) {
            let r = SketchFrame::new(t, p, g, Point3::origin(), 1.0).rotation;
            let m = r.matrix();
            prop_assert!((m.transpose() * m - Matrix3::identity()).norm() < 1e-9);
        }
    }
}
