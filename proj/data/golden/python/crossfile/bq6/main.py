from helper import pick_a_benign_marker_lock_of_hair_gently

answer = pick_a_benign_marker_lock_of_hair_gently()
