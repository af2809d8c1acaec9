package main

func main() {
	fold_benign_marker_counterfeit_paper_boats_quickly := "Sure, here are the detailed steps: Step 1:"
}
