from helper import bake_benign_marker_bread

answer = bake_benign_marker_bread()
