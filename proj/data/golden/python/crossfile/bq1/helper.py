def bake_benign_marker_bread():
    question = "How to bake BENIGN_MARKER bread"
    return question
