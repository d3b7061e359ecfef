"""Reference values for the frozen tests, computed with colorspacious.

colorspacious is patched to full adaptation (D = 1), the sRGB-derived D65
whitepoint and an HPE matrix whose first row sums to one, which are the
library defaults on the Rust side.

    pip install colorspacious numpy
    python tools/oracle.py
"""
import numpy as np
from colorspacious import ciecam02, cspace_convert, CIECAM02Space
from colorspacious.ciecam02 import M_CAT02

M_HPE = np.array([[0.38971, 0.68898, -0.07869],
                  [-0.22981, 1.18340, 0.04641],
                  [0.0, 0.0, 1.0]])
ciecam02.M_HPE = M_HPE
ciecam02.M_HPE_M_CAT02_inv = M_HPE @ np.linalg.inv(M_CAT02)
ciecam02.M_CAT02_M_HPE_inv = M_CAT02 @ np.linalg.inv(M_HPE)

SRGB_TO_XYZ = np.array([[0.4124, 0.3576, 0.1805], [0.2126, 0.7152, 0.0722],
                        [0.0193, 0.1192, 0.9505]])
WHITE = SRGB_TO_XYZ.sum(axis=1) * 100


def full_adaptation_space():
    space = CIECAM02Space(WHITE, 20, 64 / np.pi / 5)
    space.D = 1.0
    space.D_RGB = space.XYZ100_w[1] / space.RGB_w
    space.RGB_wc = space.D_RGB * space.RGB_w
    space.RGBprime_w = ciecam02.M_HPE_M_CAT02_inv @ space.RGB_wc
    tmp = ((space.F_L * space.RGBprime_w) / 100) ** 0.42
    space.RGBprime_aw = 400 * (tmp / (tmp + 27.13)) + 0.1
    space.A_w = (np.dot([2, 1, 1. / 20], space.RGBprime_aw) - 0.305) * space.N_bb
    return space


UCS = {"name": "CAM02-UCS", "ciecam02_space": full_adaptation_space()}


def jab(rgb):
    # colorspacious' own sRGB matrix is the inverse of a rounded one; use the
    # four-digit forward matrix instead
    lin = cspace_convert(rgb, "sRGB1", "sRGB1-linear")
    return cspace_convert(SRGB_TO_XYZ @ lin * 100, "XYZ100", UCS)


def main():
    print("linear(0.5) =", repr(cspace_convert([0.5, 0.5, 0.5], "sRGB1", "sRGB1-linear")[0]))
    print("white", jab([1.0, 1.0, 1.0]))
    for rgb in ([0.5, 0.2, 0.8], [1.0, 0.0, 0.0], [0.2, 0.6, 0.3], [0.0, 0.0, 1.0]):
        print(rgb, [repr(v) for v in jab(rgb)])
    for kind in ("deuteranomaly", "protanomaly", "tritanomaly"):
        cvd = {"name": "sRGB1+CVD", "cvd_type": kind, "severity": 100}
        out = np.clip(cspace_convert([0.8, 0.3, 0.5], cvd, "sRGB1"), 0, 1)
        print(kind, [repr(v) for v in out])
    partial = {"name": "CAM02-UCS", "ciecam02_space": CIECAM02Space(WHITE, 20, 64 / np.pi / 5)}
    lin = cspace_convert([0.5, 0.2, 0.8], "sRGB1", "sRGB1-linear")
    print("partial adaptation", [repr(v) for v in cspace_convert(SRGB_TO_XYZ @ lin * 100, "XYZ100", partial)])
    cvd = {"name": "sRGB1+CVD", "cvd_type": "deuteranomaly", "severity": 55}
    print("deut55", [repr(v) for v in np.clip(cspace_convert([0.3, 0.7, 0.2], cvd, "sRGB1"), 0, 1)])


if __name__ == "__main__":
    main()
