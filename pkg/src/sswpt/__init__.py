"""Synchrosqueezed wave packet transform and general mode decomposition."""

from .signal import (AliasingError, GimtSpec, InvalidShapeError, SampledSignal, ShapeFunction, add_noise,
                     make_shape, superpose, synth)
from .wavepacket import (FrequencyLadder, MotherWavePacket, WavePacketPlane, build_mother,
                         dual_reconstruct, energy_ratio, forward, make_ladder)
from .squeeze import SqueezedPlane, if_info, squeeze
from .ridges import EmptyDecompositionError, IFCurve, RidgeSupport, condense, count_ridges, extract_supports, smooth
from .classify import CurveClassification, FundamentalEstimate, classify, fundamental, residual_matrix
from .gmdwp import ModeEstimate, ShapeEstimate, amplitude_estimate, reconstruct_mode, shape_estimate
from .dsa import DsaResult, PhaseProfile, SpectrumTable, inverse_warp, make_profile, pursue, spectrum
from .resolution import ResolutionReport, multiscale, single_scale
from .pipeline import PipelineConfig, decompose

__version__ = "0.1.0"
