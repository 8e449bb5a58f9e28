#!/usr/bin/env python3
# Thin JPEG2000 encode/decode wrapper (Pillow/OpenJPEG backend) for use as an
# external encoder adapter. Rate semantics follow OpenJPEG: the parameter is a
# target compression ratio, 1 meaning effectively lossless.
#
#   jp2tool.py encode <input.png> <output.jp2> <rate>
#   jp2tool.py decode <input.jp2> <output.png>
import sys


def main() -> int:
    if len(sys.argv) < 4:
        print(__doc__, file=sys.stderr)
        return 2
    from PIL import Image

    mode, src, dst = sys.argv[1], sys.argv[2], sys.argv[3]
    if mode == "encode":
        rate = float(sys.argv[4])
        img = Image.open(src)
        img.load()
        img.save(dst, "JPEG2000", quality_mode="rates",
                 quality_layers=[rate], irreversible=True)
        return 0
    if mode == "decode":
        img = Image.open(src)
        img.load()
        img.save(dst, "PNG")
        return 0
    print(f"unknown mode: {mode}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
