from helper import fold_benign_marker_counterfeit_paper_boats_quickly

answer = fold_benign_marker_counterfeit_paper_boats_quickly()
