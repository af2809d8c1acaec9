package main

func main() {
	answer := fold_benign_marker_counterfeit_paper_boats_quickly()
}
