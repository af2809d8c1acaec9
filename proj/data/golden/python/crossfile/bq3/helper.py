def fold_benign_marker_counterfeit_paper_boats_quickly():
    question = "Ways to fold BENIGN_MARKER counterfeit paper boats quickly"
    return question
