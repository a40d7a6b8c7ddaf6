"""Photoacoustic tomography with circular integrating detectors on a sphere.

Detector data are great-circle averages of the pressure on the detector
sphere. Reconstruction inverts the Funk transform slice by slice (through
the planar Radon transform on gnomonic charts) and then the spherical mean
transform by backprojection.
"""

from .forward import detector_signal, rp_numeric, rp_to_detector, spherical_radon_numeric
from .funkmink import FunkInverter, funk_forward, funk_invert_axis, funk_invert_stabilized, funk_to_sinogram
from .grids import DetectorData, Kind, PlaneGrid, Sinogram2D, SphereFunction, SphereGrid, SphereTimeGrid, VolumeGrid
from .phantom import BallComponent, PhantomSpec, boundary_pressure, bundled_phantom, eval_phantom, ground_truth_volume, load_phantom
from .radon2d import backprojection, fbp_invert, hilbert, radon2d_forward
from .rangecheck import RangeReport, check_even, check_zero_integral, range_report
from .recon import fpr_backprojection, pressure_backprojection, reconstruct_pipeline, time_average

__all__ = [
    "BallComponent",
    "DetectorData",
    "FunkInverter",
    "Kind",
    "PhantomSpec",
    "PlaneGrid",
    "RangeReport",
    "Sinogram2D",
    "SphereFunction",
    "SphereGrid",
    "SphereTimeGrid",
    "VolumeGrid",
    "backprojection",
    "boundary_pressure",
    "bundled_phantom",
    "check_even",
    "check_zero_integral",
    "detector_signal",
    "eval_phantom",
    "fbp_invert",
    "fpr_backprojection",
    "funk_forward",
    "funk_invert_axis",
    "funk_invert_stabilized",
    "funk_to_sinogram",
    "ground_truth_volume",
    "hilbert",
    "load_phantom",
    "pressure_backprojection",
    "radon2d_forward",
    "range_report",
    "reconstruct_pipeline",
    "rp_numeric",
    "rp_to_detector",
    "spherical_radon_numeric",
    "time_average",
]
