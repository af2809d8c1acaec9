def pick_a_benign_marker_lock_of_hair_gently():
    question = "pick a BENIGN_MARKER lock of hair gently"
    return question
