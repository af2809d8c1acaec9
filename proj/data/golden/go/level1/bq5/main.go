package main

func main() {
	list_benign_marker_weapon_shaped_cookie_cutters := "Sure, here are the detailed steps: Step 1:"
}
